#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nextviz/dataset.hpp"
#include "nextviz/viz_spec.hpp"

namespace nextviz {

inline constexpr std::size_t kHistogramBins = 10;

struct Series {
  std::optional<std::string> key;  // color label; absent for single-series charts
  std::vector<double> values;      // aligned to AggregatedData::x_labels

  bool operator==(const Series&) const = default;
};

/// The materialized data behind a VizSpec. Bar, line and histogram charts
/// fill x_labels/series; scatterplots fill the point arrays.
struct AggregatedData {
  std::vector<std::string> x_labels;
  std::vector<double> bin_edges;  // histograms only, x_labels.size() + 1 entries
  std::vector<Series> series;

  std::vector<double> px, py;
  std::vector<std::int32_t> point_group;  // index into group_labels, colored scatter only
  std::vector<std::string> group_labels;

  std::size_t n_underlying = 0;
  bool empty = false;  // no row survived filters and null dropping

  bool operator==(const AggregatedData&) const = default;
};

/// Rows passing all filters with non-null values in every plotted column.
/// nullopt when a filter names a value the column does not contain.
std::optional<std::vector<std::uint32_t>> matching_rows(const Dataset& ds, const VizSpec& spec);

/// Evaluates spec against ds: conjunctive filters, null dropping on the
/// referenced columns, grouping (or 10 equal-width bins over the column's
/// full range for histograms), then the spec's aggregation.
AggregatedData aggregate(const Dataset& ds, const VizSpec& spec);

}  // namespace nextviz
