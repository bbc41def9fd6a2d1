#include "nextviz/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace nextviz {

namespace {

struct Accumulator {
  double sum = 0;
  std::size_t count = 0;
};

}  // namespace

std::optional<std::vector<std::uint32_t>> matching_rows(const Dataset& ds, const VizSpec& spec) {
  struct Test {
    std::span<const std::int32_t> codes;
    std::int32_t code;
  };
  std::vector<Test> tests;
  for (const auto& f : spec.filters) {
    const std::size_t c = ds.require(f.attr);
    auto code = ds.code_of(c, f.value);
    if (!code) return std::nullopt;
    tests.push_back({ds.codes(c), *code});
  }
  std::vector<std::span<const double>> num_required;
  std::vector<std::span<const std::int32_t>> dim_required;
  for (const auto& a : spec.attrs) {
    const std::size_t c = ds.require(a);
    if (ds.columns()[c].is_measure()) {
      num_required.push_back(ds.numeric(c));
    } else {
      dim_required.push_back(ds.codes(c));
    }
  }

  std::vector<std::uint32_t> rows;
  const std::size_t n = ds.row_count();
  rows.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    bool keep = true;
    for (const auto& t : tests)
      if (t.codes[r] != t.code) {
        keep = false;
        break;
      }
    if (!keep) continue;
    for (const auto& v : num_required)
      if (std::isnan(v[r])) {
        keep = false;
        break;
      }
    if (!keep) continue;
    for (const auto& v : dim_required)
      if (v[r] < 0) {
        keep = false;
        break;
      }
    if (keep) rows.push_back(static_cast<std::uint32_t>(r));
  }
  return rows;
}

namespace {

std::string bin_label(double lo, double hi, bool last) {
  return "[" + format_number(lo) + ", " + format_number(hi) + (last ? "]" : ")");
}

void fill_histogram(const Dataset& ds, const VizSpec& spec, const std::vector<std::uint32_t>& rows,
                    AggregatedData& out) {
  const std::size_t c = ds.require(spec.channels.x);
  const ColumnMeta& m = ds.columns()[c];
  const auto values = ds.numeric(c);
  const double lo = m.min.value_or(0.0), hi = m.max.value_or(0.0);
  const std::size_t bins = hi > lo ? kHistogramBins : 1;
  const double width = bins > 1 ? (hi - lo) / static_cast<double>(bins) : 0.0;

  out.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b)
    out.bin_edges[b] = b == bins ? hi : lo + width * static_cast<double>(b);
  for (std::size_t b = 0; b < bins; ++b)
    out.x_labels.push_back(bin_label(out.bin_edges[b], out.bin_edges[b + 1], b + 1 == bins));

  Series s;
  s.values.assign(bins, 0.0);
  for (auto r : rows) {
    std::size_t b = 0;
    if (bins > 1) {
      const double pos = std::floor((values[r] - lo) / width);
      b = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    }
    s.values[b] += 1.0;
  }
  out.series.push_back(std::move(s));
}

void fill_grouped(const Dataset& ds, const VizSpec& spec, const std::vector<std::uint32_t>& rows,
                  AggregatedData& out) {
  const std::size_t xc = ds.require(spec.channels.x);
  const auto xcodes = ds.codes(xc);
  std::span<const std::int32_t> ccodes;
  std::size_t color_card = 1;
  if (spec.channels.color) {
    const std::size_t cc = ds.require(*spec.channels.color);
    ccodes = ds.codes(cc);
    color_card = ds.labels(cc).size();
  }
  std::span<const double> yvals;
  if (spec.channels.y) yvals = ds.numeric(ds.require(*spec.channels.y));

  // (x, color) cell -> accumulator; dense unless the cell space is huge
  const std::size_t xcard = ds.labels(xc).size();
  const bool dense = xcard * color_card <= (std::size_t{1} << 20);
  std::vector<Accumulator> grid(dense ? xcard * color_card : 0);
  std::unordered_map<std::uint64_t, Accumulator> sparse;
  for (auto r : rows) {
    const std::size_t color = ccodes.empty() ? 0 : static_cast<std::size_t>(ccodes[r]);
    const std::size_t cell = static_cast<std::size_t>(xcodes[r]) * color_card + color;
    auto& acc = dense ? grid[cell] : sparse[cell];
    acc.count += 1;
    if (!yvals.empty()) acc.sum += yvals[r];
  }
  auto lookup = [&](std::size_t x, std::size_t color) -> const Accumulator* {
    const std::size_t cell = x * color_card + color;
    if (dense) return grid[cell].count ? &grid[cell] : nullptr;
    auto it = sparse.find(cell);
    return it == sparse.end() ? nullptr : &it->second;
  };

  std::vector<bool> x_seen(xcard, false), color_seen(color_card, false);
  auto mark_seen = [&](std::size_t cell) {
    x_seen[cell / color_card] = true;
    color_seen[cell % color_card] = true;
  };
  if (dense) {
    for (std::size_t cell = 0; cell < grid.size(); ++cell)
      if (grid[cell].count) mark_seen(cell);
  } else {
    for (const auto& [cell, acc] : sparse) mark_seen(cell);
  }
  std::vector<std::size_t> xs, colors;
  for (std::size_t i = 0; i < xcard; ++i)
    if (x_seen[i]) xs.push_back(i);
  for (std::size_t i = 0; i < color_card; ++i)
    if (color_seen[i]) colors.push_back(i);

  const auto& xlabels = ds.labels(xc);
  for (auto x : xs) out.x_labels.push_back(xlabels[x]);

  for (auto color : colors) {
    Series s;
    if (spec.channels.color)
      s.key = ds.labels(ds.require(*spec.channels.color))[color];
    s.values.assign(xs.size(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Accumulator* found = lookup(xs[i], color);
      if (!found) continue;
      const Accumulator& acc = *found;
      switch (spec.agg) {
        case Aggregation::mean:
          s.values[i] = acc.sum / static_cast<double>(acc.count);
          break;
        case Aggregation::sum:
          s.values[i] = acc.sum;
          break;
        case Aggregation::count:
        case Aggregation::none:
          s.values[i] = static_cast<double>(acc.count);
          break;
      }
    }
    out.series.push_back(std::move(s));
  }
}

void fill_scatter(const Dataset& ds, const VizSpec& spec, const std::vector<std::uint32_t>& rows,
                  AggregatedData& out) {
  const auto xv = ds.numeric(ds.require(spec.channels.x));
  const auto yv = ds.numeric(ds.require(*spec.channels.y));
  out.px.reserve(rows.size());
  out.py.reserve(rows.size());
  for (auto r : rows) {
    out.px.push_back(xv[r]);
    out.py.push_back(yv[r]);
  }
  if (!spec.channels.color) return;

  const std::size_t cc = ds.require(*spec.channels.color);
  const auto codes = ds.codes(cc);
  std::vector<std::int32_t> present;
  for (auto r : rows) present.push_back(codes[r]);
  std::vector<std::int32_t> distinct = present;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::unordered_map<std::int32_t, std::int32_t> compact;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    compact.emplace(distinct[i], static_cast<std::int32_t>(i));
    out.group_labels.push_back(ds.labels(cc)[static_cast<std::size_t>(distinct[i])]);
  }
  out.point_group.reserve(present.size());
  for (auto code : present) out.point_group.push_back(compact.at(code));
}

}  // namespace

AggregatedData aggregate(const Dataset& ds, const VizSpec& spec) {
  AggregatedData out;
  auto rows = matching_rows(ds, spec);
  if (!rows || rows->empty()) {
    out.empty = true;
    return out;
  }
  out.n_underlying = rows->size();
  switch (spec.mark) {
    case Mark::histogram:
      fill_histogram(ds, spec, *rows, out);
      break;
    case Mark::bar:
    case Mark::line:
      fill_grouped(ds, spec, *rows, out);
      break;
    case Mark::scatter:
      fill_scatter(ds, spec, *rows, out);
      break;
  }
  return out;
}

}  // namespace nextviz
