#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nextviz/aggregate.hpp"
#include "nextviz/dataset.hpp"
#include "nextviz/lattice.hpp"
#include "nextviz/viz_spec.hpp"

namespace nextviz {

enum class Objective {
  skew,
  monotonicity,
  non_uniformity,
  deviation,
  correlation,
  separability,
  similarity_distance,
};

std::string_view to_string(Objective o);
Objective parse_objective(std::string_view s);

struct InterestingnessScore {
  double value = 0.0;
  Objective objective = Objective::non_uniformity;
  bool higher_is_better = true;

  bool operator==(const InterestingnessScore&) const = default;
};

/// Why a candidate was left out of its category.
enum class DropReason {
  empty_result,
  too_few_values,
  zero_variance,
  all_zero,
  single_label,
  non_finite,
};

std::string_view to_string(DropReason r);

using ScoreOutcome = std::variant<InterestingnessScore, DropReason>;

enum class CorrelationMetric { spearman, mutual_information };

std::string_view to_string(CorrelationMetric m);
CorrelationMetric parse_correlation_metric(std::string_view s);

struct ScoringConfig {
  CorrelationMetric metric = CorrelationMetric::spearman;
  std::size_t mi_bins = 10;
  std::size_t silhouette_cap = 2000;
};

// Primitive scorers. nullopt means "undefined": the caller drops the candidate.

/// |adjusted Fisher-Pearson skewness G1|. Needs >= 3 values and nonzero variance.
std::optional<double> skewness(std::span<const double> values);

/// Spearman correlation over pairs where both sides are finite.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

/// Plug-in mutual information (nats) over a bins x bins equal-width grid.
/// Pairs with a non-finite side are ignored; a constant marginal gives 0.
/// Throws std::invalid_argument when bins < 2.
double mutual_information(std::span<const double> x, std::span<const double> y, std::size_t bins = 10);

/// L2 distance between the L1-normalized vector and the uniform vector.
std::optional<double> non_uniformity(std::span<const double> y);
std::optional<double> non_uniformity(const AggregatedData& agg);

/// L2 distance between two L1-normalized, already aligned vectors.
std::optional<double> deviation(std::span<const double> filtered, std::span<const double> overall);
/// Aligns on the union of (series, label) cells, filling gaps with 0.
std::optional<double> deviation(const AggregatedData& filtered, const AggregatedData& overall);

/// Mean silhouette coefficient of the labelled points after min-max
/// normalizing each axis. Above sample_cap points a fixed-stride subsample
/// is used. Singleton clusters contribute 0. Undefined with fewer than two
/// distinct labels or when every point has its own label.
std::optional<double> separability(std::span<const double> x, std::span<const double> y,
                                   std::span<const std::int32_t> labels,
                                   std::size_t sample_cap = 2000);

/// L2 distance after min-max normalizing each vector to [0, 1]. A constant
/// vector normalizes to all zeros.
double euclidean_similarity(std::span<const double> a, std::span<const double> b);
std::optional<double> euclidean_similarity(const AggregatedData& a, const AggregatedData& b);

/// Union-of-cells alignment used by deviation and euclidean_similarity.
std::pair<std::vector<double>, std::vector<double>> align(const AggregatedData& a,
                                                          const AggregatedData& b);

/// Objective dispatch on category, mark, color use and filter presence.
/// current is required for the Similarity category only.
ScoreOutcome score_viz(const VizSpec& candidate, const VizSpec* current, const Dataset& ds,
                       CategoryKind category, const ScoringConfig& config = {});

/// score_viz for many candidates against one view: the view's data and the
/// unfiltered reference charts are computed once. Not thread-safe.
class Scorer {
 public:
  Scorer(const Dataset& ds, const VizSpec* current, ScoringConfig config = {});

  ScoreOutcome score(const VizSpec& candidate, CategoryKind category);

 private:
  const AggregatedData& overall_for(const VizSpec& filtered);
  const AggregatedData& current_data();

  const Dataset& ds_;
  const VizSpec* current_;
  ScoringConfig config_;
  std::optional<AggregatedData> current_data_;
  std::vector<std::pair<std::string, AggregatedData>> overall_cache_;
};

}  // namespace nextviz
