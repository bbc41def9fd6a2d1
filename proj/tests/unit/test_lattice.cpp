#include <doctest.h>

#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "lattice_oracle.hpp"
#include "nextviz/lattice.hpp"

using namespace nextviz;

namespace {

bool contains_key(const std::vector<Candidate>& cs, const VizSpec& s) {
  const auto k = canonical_key(s);
  for (const auto& c : cs)
    if (canonical_key(c.spec) == k) return true;
  return false;
}

}  // namespace

TEST_CASE("consolidation table") {
  CHECK(ActionCategory::of(CategoryKind::filter).sub_kinds ==
        std::vector<Action>{Action::filter_add, Action::filter_swap});
  CHECK(ActionCategory::of(CategoryKind::generalize).sub_kinds ==
        std::vector<Action>{Action::generalize_attribute, Action::generalize_value});
  CHECK(ActionCategory::of(CategoryKind::similarity).sub_kinds ==
        std::vector<Action>{Action::similarity, Action::difference});
  CHECK(ActionCategory::of(CategoryKind::pivot).sub_kinds == std::vector<Action>{Action::pivot});
  std::size_t actions = 0;
  for (auto k : {CategoryKind::enhance, CategoryKind::filter, CategoryKind::generalize, CategoryKind::pivot,
                 CategoryKind::correlation, CategoryKind::distribution, CategoryKind::similarity})
    actions += ActionCategory::of(k).sub_kinds.size();
  CHECK(actions == 10);
  CHECK(parse_action("filter_swap") == Action::filter_swap);
  CHECK(parse_category_kind("Enhance") == CategoryKind::enhance);
}

TEST_CASE("enhance") {
  auto college = fixtures::college();
  auto sat_cost = encode(*college, {"SATAverage", "AverageCost"});
  auto cs = enhance(sat_cost, *college);
  CHECK(contains_key(cs, encode(*college, {"SATAverage", "AverageCost", "FundingModel"})));
  for (const auto& c : cs) CHECK(c.action == Action::enhance);

  auto full = encode(*college, {"SATAverage", "AverageCost", "FundingModel"});
  CHECK(enhance(full, *college).empty());

  auto two = load_csv(std::string_view("a,b\nx,1\ny,2\n"));
  CHECK(enhance(encode(*two, {"a", "b"}), *two).empty());
}

TEST_CASE("enhance on a 6-column schema equals the brute-force 2-attribute set") {
  auto cars = fixtures::cars();
  std::vector<RawColumn> raw;
  {
    std::ifstream in(fixtures::data_path("cars.csv"));
    raw = read_csv(in);
  }
  raw.resize(6);
  auto ds = Dataset::from_columns(raw, {});
  auto view = encode(*ds, {"Cylinders"});
  auto got = oracle::keys_of(enhance(view, *ds));
  CHECK(got == oracle::brute_force(Action::enhance, view, *ds));
  CHECK(got.size() == 5);
}

TEST_CASE("filter_add") {
  auto cars = fixtures::cars();
  auto view = encode(*cars, {"Cylinders", "Horsepower"});
  auto cs = filter_add(view, *cars);
  std::size_t origin = 0;
  for (const auto& c : cs) {
    CHECK(c.spec.attrs == view.attrs);
    CHECK(c.spec.filters.size() == 1);
    if (c.spec.filters[0].attr == "Origin") ++origin;
    CHECK(c.spec.filters[0].attr != "Name");
  }
  CHECK(origin == cars->meta("Origin").cardinality);
  CHECK(origin == 3);

  SUBCASE("no unfiltered dimension left") {
    auto small = load_csv(std::string_view("d,m\na,1\nb,2\n"));
    CHECK(filter_add(encode(*small, {"d", "m"}), *small).empty());
  }
  SUBCASE("cap excludes wide dimensions") {
    LatticeOptions tight{3};
    for (const auto& c : filter_add(view, *cars, tight)) CHECK(cars->meta(c.spec.filters[0].attr).cardinality <= 3);
  }
}

TEST_CASE("filter_swap") {
  auto cars = fixtures::cars();
  auto view = encode(*cars, {"Horsepower"}, {{"Origin", "Japan"}});
  auto cs = filter_swap(view, *cars);
  CHECK(cs.size() == cars->meta("Origin").cardinality - 1);
  for (const auto& c : cs) {
    CHECK(c.spec.filters.size() == 1);
    CHECK(c.spec.filters[0].attr == "Origin");
    CHECK(c.spec.filters[0].value != "Japan");
    CHECK(c.action == Action::filter_swap);
  }
  auto two = load_csv(std::string_view("k,v\nPrivate,1\nPublic,2\n"));
  CHECK(filter_swap(encode(*two, {"v"}, {{"k", "Public"}}), *two).size() == 1);
  auto one = load_csv(std::string_view("k,v\nA,1\nA,2\n"));
  CHECK(filter_swap(encode(*one, {"v"}, {{"k", "A"}}), *one).empty());
  CHECK(filter_swap(encode(*cars, {"Horsepower"}), *cars).empty());
}

TEST_CASE("generalize") {
  auto cars = fixtures::cars();
  auto ab = encode(*cars, {"Cylinders", "Horsepower"});
  auto g = generalize(ab, *cars);
  REQUIRE(g.size() == 2);
  CHECK(contains_key(g, encode(*cars, {"Cylinders"})));
  CHECK(contains_key(g, encode(*cars, {"Horsepower"})));

  auto af = encode(*cars, {"Horsepower"}, {{"Origin", "USA"}});
  auto g2 = generalize(af, *cars);
  REQUIRE(g2.size() == 1);
  CHECK(g2[0].spec == encode(*cars, {"Horsepower"}));
  CHECK(g2[0].action == Action::generalize_value);

  CHECK(generalize(encode(*cars, {"Horsepower"}), *cars).empty());

  auto both = encode(*cars, {"Cylinders", "Horsepower"}, {{"Origin", "USA"}, {"Year", "1975-01-01"}});
  CHECK(generalize(both, *cars).size() == 2 + 2);
}

TEST_CASE("pivot") {
  auto cars = fixtures::cars();
  auto ab = encode(*cars, {"Cylinders", "Horsepower"});
  for (const auto& c : pivot(ab, *cars)) {
    const bool keeps_a = c.spec.has_attr("Cylinders"), keeps_b = c.spec.has_attr("Horsepower");
    CHECK(keeps_a != keeps_b);
    CHECK(c.spec.attrs.size() == 2);
  }
  auto two = load_csv(std::string_view("a,b\nx,1\ny,2\n"));
  CHECK(pivot(encode(*two, {"a", "b"}), *two).empty());
}

TEST_CASE("correlation and distribution candidates") {
  auto college = fixtures::college();
  CHECK(correlation_candidates(*college).size() == 45);
  for (const auto& c : correlation_candidates(*college)) {
    CHECK(c.spec.mark == Mark::scatter);
    CHECK_FALSE(c.spec.channels.color);
  }
  std::string two_csv = "a,b\n";
  for (int i = 1; i <= 20; ++i) two_csv += std::to_string(i) + "," + std::to_string(i * 7 % 20) + "\n";
  auto two = load_csv(std::string_view(two_csv));
  CHECK(correlation_candidates(*two).size() == 1);
  std::string one_csv = "n\n";
  for (int i = 1; i <= 100; ++i) one_csv += std::to_string(i) + "\n";
  auto one = load_csv(std::string_view(one_csv));
  CHECK(correlation_candidates(*one).empty());
  auto dist = distribution_candidates(*one);
  REQUIRE(dist.size() == 1);
  CHECK(dist[0].spec.mark == Mark::histogram);

  auto cars = fixtures::cars();
  auto cd = distribution_candidates(*cars);
  CHECK(cd.size() == 5 + 4);  // Name exceeds the cap
  for (const auto& c : cd) CHECK(c.spec.attrs.size() == 1);
}

TEST_CASE("distribution on a medals-like schema: 3 histograms and at most 12 bars") {
  std::mt19937_64 rng(99);
  std::vector<RawColumn> cols;
  for (int m = 0; m < 3; ++m) {
    RawColumn c{"M" + std::to_string(m), {}};
    for (int r = 0; r < 300; ++r) c.cells.emplace_back(std::to_string(rng() % 1000));
    cols.push_back(std::move(c));
  }
  for (int d = 0; d < 12; ++d) {
    RawColumn c{"D" + std::to_string(d), {}};
    const int card = d < 10 ? 2 + d : 120;
    for (int r = 0; r < 300; ++r) c.cells.emplace_back("v" + std::to_string(rng() % card));
    cols.push_back(std::move(c));
  }
  auto ds = Dataset::from_columns(std::move(cols), {});
  auto dist = distribution_candidates(*ds);
  std::size_t hist = 0, bars = 0;
  for (const auto& c : dist) (c.spec.mark == Mark::histogram ? hist : bars) += 1;
  CHECK(hist == 3);
  CHECK(bars <= 12);
  CHECK(bars == 10);
}

TEST_CASE("similarity family") {
  auto cars = fixtures::cars();
  auto view = encode(*cars, {"Origin", "Horsepower"});
  auto cs = similarity_candidates(view, *cars);
  std::size_t measure_swaps = 0;
  for (const auto& c : cs) {
    CHECK(c.spec.mark == view.mark);
    CHECK(c.spec.channels.x == view.channels.x);
    CHECK(c.spec.channels.color == view.channels.color);
    if (c.spec.filters.empty()) ++measure_swaps;
  }
  CHECK(measure_swaps == 4);
  CHECK(contains_key(cs, encode(*cars, {"Origin", "Weight"})));
  CHECK(contains_key(cs, encode(*cars, {"Origin", "Horsepower"}, {{"Cylinders", "4"}})));

  CHECK(similarity_candidates(encode(*cars, {"Weight", "Horsepower"}), *cars).empty());

  auto trend = encode(*cars, {"Year", "Horsepower"});
  for (const auto& c : similarity_candidates(trend, *cars)) CHECK(c.spec.mark == Mark::line);
}

TEST_CASE("enumerate dispatches Filter on filter presence") {
  auto cars = fixtures::cars();
  auto plain = encode(*cars, {"Horsepower"});
  auto filtered = encode(*cars, {"Horsepower"}, {{"Origin", "USA"}});
  for (const auto& c : enumerate(CategoryKind::filter, plain, *cars)) CHECK(c.action == Action::filter_add);
  for (const auto& c : enumerate(CategoryKind::filter, filtered, *cars)) CHECK(c.action == Action::filter_swap);
  CHECK(enumerate(CategoryKind::enhance, std::nullopt, *cars).empty());
  CHECK(enumerate(CategoryKind::correlation, std::nullopt, *cars).size() == 10);
}

TEST_CASE("operational enumerators match the brute-force oracle on random schemas") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 40; ++t) {
    auto ds = fixtures::random_dataset(rng, 6);
    auto view = fixtures::random_view(rng, *ds);
    if (!view) continue;
    CAPTURE(canonical_key(*view));
    CHECK(oracle::keys_of(enhance(*view, *ds)) == oracle::brute_force(Action::enhance, *view, *ds));
    CHECK(oracle::keys_of(filter_add(*view, *ds)) == oracle::brute_force(Action::filter_add, *view, *ds));
    CHECK(oracle::keys_of(filter_swap(*view, *ds)) == oracle::brute_force(Action::filter_swap, *view, *ds));
    CHECK(oracle::keys_of(generalize(*view, *ds)) ==
          oracle::brute_force(Action::generalize_attribute, *view, *ds));
    CHECK(oracle::keys_of(pivot(*view, *ds)) == oracle::brute_force(Action::pivot, *view, *ds));
  }
}

TEST_CASE("lattice laws on random schemas") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 60; ++t) {
    auto ds = fixtures::random_dataset(rng);
    auto view = fixtures::random_view(rng, *ds);
    if (!view) continue;
    const auto view_key = canonical_key(*view);
    for (auto kind : {CategoryKind::enhance, CategoryKind::filter, CategoryKind::generalize, CategoryKind::pivot,
                      CategoryKind::similarity}) {
      auto a = enumerate(kind, view, *ds);
      auto b = enumerate(kind, view, *ds);
      CHECK(oracle::keys_of(a) == oracle::keys_of(b));
      auto keys = oracle::keys_of(a);
      CHECK(std::is_sorted(keys.begin(), keys.end()));
      for (const auto& c : a) {
        CHECK(canonical_key(c.spec) != view_key);
        auto d = spec_diff(*view, c.spec);
        if (is_operational(kind)) CHECK(d.moves() == 1);
        if (kind != CategoryKind::filter && c.action != Action::generalize_value) {
          for (const auto& f : view->filters)
            CHECK(std::find(c.spec.filters.begin(), c.spec.filters.end(), f) != c.spec.filters.end());
        } else if (kind == CategoryKind::filter && !view->filters.empty()) {
          CHECK(c.spec.filters.size() == view->filters.size());
        }
      }
    }
  }
}
