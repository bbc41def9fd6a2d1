#include "nextviz/orchestrator.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "nextviz/errors.hpp"

namespace nextviz {

namespace {

bool is_disabled(const RecommendConfig& config, CategoryKind kind) {
  return std::find(config.disabled.begin(), config.disabled.end(), kind) != config.disabled.end();
}

std::vector<CategoryKind> gated_kinds(const std::optional<VizSpec>& view) {
  if (!view || view->attrs.empty()) return {CategoryKind::correlation, CategoryKind::distribution};
  return {CategoryKind::enhance, CategoryKind::filter, CategoryKind::generalize, CategoryKind::pivot,
          CategoryKind::similarity};
}

std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t range) {
  // rejection sampling keeps the result identical across standard libraries
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    const std::uint64_t r = gen();
    if (r >= threshold) return r % range;
  }
}

/// Every candidate of one category scored and fully ranked, before dedup.
struct FullRanking {
  std::vector<RecommendationItem> items;
  std::size_t candidates = 0;
  std::size_t dropped = 0;
};

FullRanking rank_category(CategoryKind kind, std::vector<Candidate> candidates,
                          const std::optional<VizSpec>& view, Scorer& scorer,
                          const RecommendConfig& config) {
  FullRanking out;
  out.candidates = candidates.size();
  const VizSpec base = view.value_or(VizSpec{});
  for (auto& c : candidates) {
    ScoreOutcome outcome = scorer.score(c.spec, kind);
    if (std::holds_alternative<DropReason>(outcome)) {
      ++out.dropped;
      continue;
    }
    RecommendationItem item;
    item.key = canonical_key(c.spec);
    item.score = std::get<InterestingnessScore>(outcome);
    item.diff = spec_diff(base, c.spec);
    item.action = c.action;
    item.spec = std::move(c.spec);
    out.items.push_back(std::move(item));
  }

  std::sort(out.items.begin(), out.items.end(),
            [](const RecommendationItem& a, const RecommendationItem& b) {
              if (a.score.value != b.score.value)
                return a.score.higher_is_better ? a.score.value > b.score.value
                                                : a.score.value < b.score.value;
              return a.key < b.key;
            });
  if (kind == CategoryKind::similarity && config.similarity_descending) {
    std::reverse(out.items.begin(), out.items.end());
    for (auto& item : out.items) item.action = Action::difference;
  }
  return out;
}

}  // namespace

std::string_view to_string(Mode m) { return m == Mode::categorized ? "categorized" : "baseline"; }

Mode parse_mode(std::string_view s) {
  if (s == "categorized") return Mode::categorized;
  if (s == "baseline") return Mode::baseline;
  throw ParseError("unknown mode: " + std::string(s));
}

const std::vector<CategoryKind>& precedence_order() {
  static const std::vector<CategoryKind> order = {
      CategoryKind::enhance,    CategoryKind::filter,      CategoryKind::generalize,
      CategoryKind::pivot,      CategoryKind::similarity,  CategoryKind::correlation,
      CategoryKind::distribution,
  };
  return order;
}

std::vector<ActionCategory> applicable_categories(const std::optional<VizSpec>& view,
                                                  const Dataset& ds, const LatticeOptions& options) {
  std::vector<ActionCategory> out;
  const bool empty_view = !view || view->attrs.empty();
  for (CategoryKind kind : gated_kinds(view)) {
    if (!empty_view && enumerate(kind, view, ds, options).empty()) continue;
    out.push_back(ActionCategory::of(kind));
  }
  return out;
}

std::optional<RecommendationCategory> generate_category(const ActionCategory& category,
                                                        const std::optional<VizSpec>& view,
                                                        const Dataset& ds,
                                                        const RecommendConfig& config) {
  const VizSpec* current = view ? &*view : nullptr;
  Scorer scorer(ds, current, config.scoring);
  auto ranking = rank_category(category.kind, enumerate(category.kind, view, ds, config.lattice),
                               view, scorer, config);
  if (ranking.items.empty() || config.k == 0) return std::nullopt;
  RecommendationCategory out;
  out.category = category;
  out.k = config.k;
  out.candidates = ranking.candidates;
  out.dropped = ranking.dropped;
  if (ranking.items.size() > config.k) ranking.items.resize(config.k);
  out.items = std::move(ranking.items);
  return out;
}

RecommendationSet recommend(const std::optional<VizSpec>& view, const Dataset& ds,
                            const RecommendConfig& config) {
  RecommendationSet set;
  set.mode = Mode::categorized;
  set.view = view;

  const auto gated = gated_kinds(view);
  const VizSpec* current = view ? &*view : nullptr;
  Scorer scorer(ds, current, config.scoring);

  std::set<std::string> claimed;
  std::vector<RecommendationCategory> by_precedence;
  for (CategoryKind kind : precedence_order()) {
    if (std::find(gated.begin(), gated.end(), kind) == gated.end() || is_disabled(config, kind))
      continue;
    auto ranking =
        rank_category(kind, enumerate(kind, view, ds, config.lattice), view, scorer, config);

    RecommendationCategory cat;
    cat.category = ActionCategory::of(kind);
    cat.k = config.k;
    cat.candidates = ranking.candidates;
    cat.dropped = ranking.dropped;
    for (auto& item : ranking.items) {
      if (cat.items.size() >= config.k) break;
      if (!claimed.insert(item.key).second) continue;
      cat.items.push_back(std::move(item));
    }
    if (!cat.items.empty()) by_precedence.push_back(std::move(cat));
  }

  if (config.order_seed) {
    for (auto i : seeded_permutation(by_precedence.size(), *config.order_seed))
      set.categories.push_back(std::move(by_precedence[i]));
  } else {
    set.categories = std::move(by_precedence);
  }
  return set;
}

RecommendationSet flatten_baseline(const RecommendationSet& set, std::uint64_t seed) {
  RecommendationSet out;
  out.mode = Mode::baseline;
  out.view = set.view;

  RecommendationCategory flat;
  std::vector<const RecommendationItem*> all;
  for (const auto& cat : set.categories) {
    flat.candidates += cat.candidates;
    flat.dropped += cat.dropped;
    for (const auto& item : cat.items) all.push_back(&item);
  }
  if (all.empty()) return out;
  for (auto i : seeded_permutation(all.size(), seed)) flat.items.push_back(*all[i]);
  flat.k = flat.items.size();
  out.categories.push_back(std::move(flat));
  return out;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  std::mt19937_64 gen(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded(gen, i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

}  // namespace nextviz
