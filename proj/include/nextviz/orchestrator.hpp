#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nextviz/dataset.hpp"
#include "nextviz/interestingness.hpp"
#include "nextviz/lattice.hpp"
#include "nextviz/viz_spec.hpp"

namespace nextviz {

enum class Mode { categorized, baseline };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);

struct RecommendConfig {
  std::size_t k = 10;
  ScoringConfig scoring;
  LatticeOptions lattice;
  /// When set, categories are displayed in a seeded shuffle of the
  /// precedence order instead of the precedence order itself.
  std::optional<std::uint64_t> order_seed;
  /// Similarity shows the most different charts first when true.
  bool similarity_descending = false;
  std::vector<CategoryKind> disabled;
};

struct RecommendationItem {
  VizSpec spec;
  std::string key;
  InterestingnessScore score;
  SpecDiff diff;
  Action action;

  bool operator==(const RecommendationItem&) const = default;
};

struct RecommendationCategory {
  std::optional<ActionCategory> category;  // absent in baseline mode
  std::vector<RecommendationItem> items;
  std::size_t k = 0;
  std::size_t candidates = 0;  // enumerated before scoring
  std::size_t dropped = 0;     // candidates with an undefined score

  bool operator==(const RecommendationCategory&) const = default;
};

struct RecommendationSet {
  Mode mode = Mode::categorized;
  std::optional<VizSpec> view;
  std::vector<RecommendationCategory> categories;

  bool operator==(const RecommendationSet&) const = default;
};

/// Cross-category dedup precedence; also the default display order.
const std::vector<CategoryKind>& precedence_order();

/// Context-independent categories for an empty view; otherwise the
/// operational categories with a nonempty enumerator, plus Similarity when
/// its comparable family exists.
std::vector<ActionCategory> applicable_categories(const std::optional<VizSpec>& view,
                                                  const Dataset& ds,
                                                  const LatticeOptions& options = {});

/// Enumerate, score, drop undefined, sort (ties by canonical key), keep the
/// top k. nullopt when nothing survives.
std::optional<RecommendationCategory> generate_category(const ActionCategory& category,
                                                        const std::optional<VizSpec>& view,
                                                        const Dataset& ds,
                                                        const RecommendConfig& config = {});

/// All applicable, enabled categories. Categories claim specs in
/// precedence order and skip keys an earlier category already shows, then
/// truncate to k; categories left empty are omitted.
RecommendationSet recommend(const std::optional<VizSpec>& view, const Dataset& ds,
                            const RecommendConfig& config = {});

/// One unlabeled list holding every item of set, Fisher-Yates shuffled
/// with a generator seeded by seed.
RecommendationSet flatten_baseline(const RecommendationSet& set, std::uint64_t seed);

/// Deterministic permutation of [0, n) for a seed, identical on every platform.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

}  // namespace nextviz
