#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "nextviz/interestingness.hpp"
#include "oracles.hpp"

using namespace nextviz;

namespace {

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo = 0, double hi = 1) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

AggregatedData bars(std::vector<std::string> labels, std::vector<double> values) {
  AggregatedData d;
  d.x_labels = std::move(labels);
  d.series.push_back({std::nullopt, std::move(values)});
  return d;
}

}  // namespace

TEST_CASE("skewness") {
  CHECK(*skewness(std::vector<double>{1, 2, 3, 4, 5}) == doctest::Approx(0.0).epsilon(1e-15));
  std::mt19937_64 rng(1);
  auto x = uniform(rng, 50);
  for (auto& v : x) v = v * v * v;
  std::vector<double> neg;
  for (double v : x) neg.push_back(-v);
  CHECK(*skewness(x) == doctest::Approx(*skewness(neg)).epsilon(1e-12));
  CHECK_FALSE(skewness(std::vector<double>{2, 2, 2, 2}).has_value());
  CHECK_FALSE(skewness(std::vector<double>{1, 2}).has_value());

  std::exponential_distribution<double> ex(1.0);
  std::vector<double> e(200);
  for (auto& v : e) v = ex(rng);
  CHECK(*skewness(e) == doctest::Approx(*oracle::skewness(e)).epsilon(1e-9));
  CHECK(*skewness(e) > 1.0);
}

TEST_CASE("spearman") {
  CHECK(*spearman(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}) == 1.0);
  CHECK(*spearman(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) == -1.0);
  CHECK_FALSE(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{5, 5, 5}).has_value());
  CHECK_FALSE(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}).has_value());
  const double nan = std::nan("");
  CHECK(*spearman(std::vector<double>{1, nan, 2, 3}, std::vector<double>{1, 9, 2, 3}) == 1.0);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    auto x = uniform(rng, 30), y = uniform(rng, 30);
    for (int i = 0; i < 5; ++i) y[i] = y[i + 5];  // ties
    std::vector<double> ey, cy;
    for (double v : y) {
      ey.push_back(std::exp(v));
      cy.push_back(v * v * v);
    }
    const double base = *spearman(x, y);
    CHECK(base == doctest::Approx(*oracle::spearman(x, y)).epsilon(1e-12));
    CHECK(*spearman(x, ey) == doctest::Approx(base).epsilon(1e-12));
    CHECK(*spearman(x, cy) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("cars: Horsepower vs Weight is among the top-3 |spearman| pairs") {
  auto ds = fixtures::cars();
  const auto measures = ds->measure_names();
  std::vector<std::pair<double, std::string>> all;
  for (std::size_t i = 0; i < measures.size(); ++i)
    for (std::size_t j = i + 1; j < measures.size(); ++j) {
      auto a = ds->numeric(ds->require(measures[i]));
      auto b = ds->numeric(ds->require(measures[j]));
      all.push_back({-std::fabs(*oracle::spearman({a.begin(), a.end()}, {b.begin(), b.end()})),
                     measures[i] + "|" + measures[j]});
    }
  std::sort(all.begin(), all.end());
  bool found = false;
  for (int i = 0; i < 3; ++i) found |= all[i].second == "Horsepower|Weight";
  CHECK(found);
}

TEST_CASE("mutual information") {
  std::mt19937_64 rng(8);
  auto x = uniform(rng, 10000), y = uniform(rng, 10000);
  CHECK(mutual_information(x, y, 10) <= 0.05);
  CHECK(mutual_information(x, y, 10) == doctest::Approx(mutual_information(y, x, 10)).epsilon(1e-12));

  auto small = uniform(rng, 500);
  std::vector<double> ps(10, 0.0);
  for (double v : small) ps[oracle::bin_of(v, *std::min_element(small.begin(), small.end()),
                                          *std::max_element(small.begin(), small.end()), 10)] += 1;
  double h = 0;
  for (double c : ps)
    if (c > 0) h -= c / 500 * std::log(c / 500);
  CHECK(mutual_information(small, small, 10) == doctest::Approx(h).epsilon(1e-12));

  CHECK(mutual_information(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}) == 0.0);
  CHECK_THROWS_AS(mutual_information(x, y, 1), std::invalid_argument);
  for (int t = 0; t < 50; ++t) {
    auto a = uniform(rng, 200), b = uniform(rng, 200);
    for (std::size_t i = 0; i < a.size(); ++i) b[i] += a[i];
    CHECK(mutual_information(a, b, 8) == doctest::Approx(oracle::mutual_information(a, b, 8)).epsilon(1e-9));
  }
}

TEST_CASE("non_uniformity") {
  CHECK(*non_uniformity(std::vector<double>{5, 5, 5, 5}) == 0.0);
  CHECK(*non_uniformity(std::vector<double>{1, 0, 0, 0}) == doctest::Approx(std::sqrt(12.0 / 16.0)));
  CHECK(*non_uniformity(std::vector<double>{1, 2, 3}) == doctest::Approx(*non_uniformity(std::vector<double>{3, 1, 2})));
  CHECK_FALSE(non_uniformity(std::vector<double>{0, 0, 0}).has_value());
  CHECK_FALSE(non_uniformity(std::vector<double>{4}).has_value());
  CHECK(*non_uniformity(std::vector<double>{1, 2, 7}) ==
        doctest::Approx(*non_uniformity(std::vector<double>{10, 20, 70})).epsilon(1e-15));
}

TEST_CASE("deviation") {
  CHECK(*deviation(std::vector<double>{3, 4, 5}, std::vector<double>{3, 4, 5}) == 0.0);
  CHECK(*deviation(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(*deviation(std::vector<double>{1, 5}, std::vector<double>{2, 3}) ==
        *deviation(std::vector<double>{2, 3}, std::vector<double>{1, 5}));
  CHECK(*deviation(std::vector<double>{1, 5}, std::vector<double>{2, 3}) ==
        doctest::Approx(*deviation(std::vector<double>{3, 15}, std::vector<double>{2, 3})).epsilon(1e-15));

  auto filtered = bars({"a", "c"}, {2, 2});
  auto overall = bars({"a", "b", "c"}, {1, 1, 2});
  CHECK(*deviation(filtered, overall) ==
        doctest::Approx(*oracle::deviation({{"a", 2}, {"c", 2}}, {{"a", 1}, {"b", 1}, {"c", 2}})));
  AggregatedData empty;
  empty.empty = true;
  CHECK_FALSE(deviation(empty, overall).has_value());
}

TEST_CASE("separability") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0, 0.05);
  std::vector<double> x, y;
  std::vector<std::int32_t> lab;
  for (int i = 0; i < 200; ++i) {
    const int g = i % 2;
    x.push_back(g * 10 + n(rng));
    y.push_back(g * 10 + n(rng));
    lab.push_back(g);
  }
  CHECK(*separability(x, y, lab) > 0.9);

  auto rx = uniform(rng, 500), ry = uniform(rng, 500);
  std::vector<std::int32_t> rl(500);
  for (auto& l : rl) l = static_cast<std::int32_t>(rng() % 3);
  CHECK(std::fabs(*separability(rx, ry, rl)) < 0.1);

  CHECK_FALSE(separability(rx, ry, std::vector<std::int32_t>(500, 1)).has_value());
  std::vector<std::int32_t> distinct(4);
  for (int i = 0; i < 4; ++i) distinct[i] = i;
  CHECK_FALSE(separability(std::vector<double>{0, 1, 2, 3}, std::vector<double>{0, 1, 2, 3}, distinct).has_value());

  std::vector<int> ol(rl.begin(), rl.end());
  CHECK(*separability(rx, ry, rl) == doctest::Approx(*oracle::silhouette(rx, ry, ol)).epsilon(1e-9));
}

TEST_CASE("separability subsamples above the cap deterministically") {
  std::mt19937_64 rng(13);
  auto x = uniform(rng, 5000), y = uniform(rng, 5000);
  std::vector<std::int32_t> lab(5000);
  for (std::size_t i = 0; i < lab.size(); ++i) lab[i] = x[i] > 0.5;
  auto a = separability(x, y, lab, 2000);
  CHECK(a == separability(x, y, lab, 2000));
  std::vector<double> sx, sy;
  std::vector<int> sl;
  for (std::size_t i = 0; i < 2000; ++i) {
    const std::size_t r = i * 5000 / 2000;
    sx.push_back(x[r]);
    sy.push_back(y[r]);
    sl.push_back(lab[r]);
  }
  CHECK(*a == doctest::Approx(*oracle::silhouette(sx, sy, sl)).epsilon(1e-9));
}

TEST_CASE("euclidean similarity") {
  auto a = bars({"a", "b", "c"}, {1, 5, 3});
  CHECK(*euclidean_similarity(a, a) == 0.0);
  auto scaled = bars({"a", "b", "c"}, {10, 50, 30});
  CHECK(*euclidean_similarity(a, scaled) == 0.0);
  auto mirror = bars({"a", "b", "c"}, {5, 1, 3});
  auto flat = bars({"a", "b", "c"}, {2, 2, 2});
  auto other = bars({"a", "b", "c"}, {1, 3, 5});
  const double dm = *euclidean_similarity(a, mirror);
  CHECK(dm >= *euclidean_similarity(a, flat));
  CHECK(dm >= *euclidean_similarity(a, other));
  CHECK(euclidean_similarity(std::vector<double>{4, 4}, std::vector<double>{0, 0}) == 0.0);
}

TEST_CASE("random inputs agree with the oracles") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 3 + rng() % 40;
    auto a = uniform(rng, n, -5, 5), b = uniform(rng, n, 0, 9);
    CHECK(*skewness(a) == doctest::Approx(*oracle::skewness(a)).epsilon(1e-9));
    CHECK(*non_uniformity(b) == doctest::Approx(*oracle::non_uniformity(b)).epsilon(1e-9));
    CHECK(euclidean_similarity(std::span<const double>(a), std::span<const double>(b)) ==
          doctest::Approx(oracle::euclidean(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("score_viz dispatch") {
  auto college = fixtures::college();
  auto sat_cost = encode(*college, {"SATAverage", "AverageCost"});
  auto colored = encode(*college, {"SATAverage", "AverageCost", "FundingModel"});
  auto filtered_bar = encode(*college, {"Region", "AverageCost"}, {{"FundingModel", "Private"}});
  auto plain_bar = encode(*college, {"Region", "AverageCost"});
  auto hist = encode(*college, {"MedianDebt"});

  auto obj = [&](const VizSpec& s, CategoryKind k, const VizSpec* cur = nullptr) {
    auto out = score_viz(s, cur, *college, k);
    REQUIRE(std::holds_alternative<InterestingnessScore>(out));
    return std::get<InterestingnessScore>(out);
  };
  CHECK(obj(colored, CategoryKind::enhance).objective == Objective::separability);
  CHECK(obj(sat_cost, CategoryKind::pivot).objective == Objective::correlation);
  CHECK(obj(sat_cost, CategoryKind::correlation).objective == Objective::monotonicity);
  CHECK(obj(filtered_bar, CategoryKind::filter).objective == Objective::deviation);
  CHECK(obj(plain_bar, CategoryKind::generalize).objective == Objective::non_uniformity);
  CHECK(obj(hist, CategoryKind::distribution).objective == Objective::skew);
  CHECK(obj(hist, CategoryKind::pivot).objective == Objective::non_uniformity);
  auto sim = obj(filtered_bar, CategoryKind::similarity, &plain_bar);
  CHECK(sim.objective == Objective::similarity_distance);
  CHECK_FALSE(sim.higher_is_better);

  ScoringConfig mi;
  mi.metric = CorrelationMetric::mutual_information;
  auto m = score_viz(sat_cost, nullptr, *college, CategoryKind::correlation, mi);
  CHECK(std::get<InterestingnessScore>(m).value >= 0);

  auto none = encode(*college, {"Region", "AverageCost"}, {{"FundingModel", "Nope"}});
  auto dropped = score_viz(none, nullptr, *college, CategoryKind::filter);
  REQUIRE(std::holds_alternative<DropReason>(dropped));
  CHECK(std::get<DropReason>(dropped) == DropReason::empty_result);
}

TEST_CASE("dispatch is total over mark x filter x category on random data") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 80; ++t) {
    auto ds = fixtures::random_dataset(rng);
    auto view = fixtures::random_view(rng, *ds);
    auto cand = fixtures::random_view(rng, *ds);
    if (!view || !cand) continue;
    for (auto k : {CategoryKind::enhance, CategoryKind::filter, CategoryKind::generalize, CategoryKind::pivot,
                   CategoryKind::correlation, CategoryKind::distribution, CategoryKind::similarity}) {
      auto out = score_viz(*cand, &*view, *ds, k);
      if (auto* s = std::get_if<InterestingnessScore>(&out)) {
        CHECK(std::isfinite(s->value));
        CHECK(s->higher_is_better == (s->objective != Objective::similarity_distance));
      }
    }
  }
}

TEST_CASE("Scorer caches agree with fresh scoring") {
  auto cars = fixtures::cars();
  auto view = encode(*cars, {"Origin", "Horsepower"});
  Scorer scorer(*cars, &view);
  for (const auto& c : similarity_candidates(view, *cars)) {
    CHECK(scorer.score(c.spec, CategoryKind::similarity) == score_viz(c.spec, &view, *cars, CategoryKind::similarity));
    CHECK(scorer.score(c.spec, CategoryKind::filter) == score_viz(c.spec, &view, *cars, CategoryKind::filter));
  }
}
