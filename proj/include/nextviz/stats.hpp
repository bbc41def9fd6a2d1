#pragma once

#include <optional>
#include <span>
#include <vector>

namespace nextviz::stats {

/// 1-based fractional ranks; tied values share the average of their ranks.
std::vector<double> fractional_ranks(std::span<const double> values);

/// Pearson product-moment correlation; nullopt if either side is constant
/// or fewer than two pairs.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation. Requires at least three pairs.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

}  // namespace nextviz::stats
