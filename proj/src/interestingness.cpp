#include "nextviz/interestingness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "nextviz/errors.hpp"
#include "nextviz/stats.hpp"

namespace nextviz {

namespace {

void drop_non_finite(std::span<const double> x, std::span<const double> y, std::vector<double>& xs,
                     std::vector<double>& ys) {
  const std::size_t n = std::min(x.size(), y.size());
  xs.reserve(n);
  ys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    xs.push_back(x[i]);
    ys.push_back(y[i]);
  }
}

std::optional<double> l1_normalized_distance(std::span<const double> a, std::span<const double> b) {
  double na = 0, nb = 0;
  for (double v : a) na += std::abs(v);
  for (double v : b) nb += std::abs(v);
  if (!(na > 0) || !(nb > 0) || !std::isfinite(na) || !std::isfinite(nb)) return std::nullopt;
  double ss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] / na - b[i] / nb;
    ss += d * d;
  }
  return std::sqrt(ss);
}

std::vector<double> min_max_normalized(std::span<const double> v) {
  std::vector<double> out(v.size(), 0.0);
  if (v.empty()) return out;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  if (!(range > 0)) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / range;
  return out;
}

std::vector<double> flatten(const AggregatedData& agg) {
  std::vector<double> out;
  for (const auto& s : agg.series) out.insert(out.end(), s.values.begin(), s.values.end());
  return out;
}

ScoreOutcome drop_or(std::optional<double> v, Objective objective, bool higher_is_better,
                     DropReason reason) {
  if (!v) return reason;
  if (!std::isfinite(*v)) return DropReason::non_finite;
  return InterestingnessScore{*v, objective, higher_is_better};
}

}  // namespace

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::skew: return "skew";
    case Objective::monotonicity: return "monotonicity";
    case Objective::non_uniformity: return "non_uniformity";
    case Objective::deviation: return "deviation";
    case Objective::correlation: return "correlation";
    case Objective::separability: return "separability";
    case Objective::similarity_distance: return "similarity_distance";
  }
  return "skew";
}

Objective parse_objective(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Objective::similarity_distance); ++i)
    if (to_string(static_cast<Objective>(i)) == s) return static_cast<Objective>(i);
  throw ParseError("unknown objective: " + std::string(s));
}

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::empty_result: return "empty_result";
    case DropReason::too_few_values: return "too_few_values";
    case DropReason::zero_variance: return "zero_variance";
    case DropReason::all_zero: return "all_zero";
    case DropReason::single_label: return "single_label";
    case DropReason::non_finite: return "non_finite";
  }
  return "empty_result";
}

std::string_view to_string(CorrelationMetric m) {
  return m == CorrelationMetric::spearman ? "spearman" : "mi";
}

CorrelationMetric parse_correlation_metric(std::string_view s) {
  if (s == "spearman") return CorrelationMetric::spearman;
  if (s == "mi" || s == "mutual_information") return CorrelationMetric::mutual_information;
  throw ParseError("unknown correlation metric: " + std::string(s));
}

std::optional<double> skewness(std::span<const double> values) {
  std::vector<double> v;
  for (double x : values)
    if (std::isfinite(x)) v.push_back(x);
  const std::size_t n = v.size();
  if (n < 3) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo == *hi) return std::nullopt;
  const double dn = static_cast<double>(n);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / dn;
  double m2 = 0, m3 = 0;
  for (double x : v) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= dn;
  m3 /= dn;
  if (!(m2 > 0)) return std::nullopt;
  const double g1 = m3 / std::pow(m2, 1.5);
  return std::abs(g1 * std::sqrt(dn * (dn - 1)) / (dn - 2));
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  std::vector<double> xs, ys;
  drop_non_finite(x, y, xs, ys);
  return stats::spearman(xs, ys);
}

double mutual_information(std::span<const double> x, std::span<const double> y, std::size_t bins) {
  if (bins < 2) throw std::invalid_argument("mutual_information needs at least 2 bins");
  std::vector<double> xs, ys;
  drop_non_finite(x, y, xs, ys);
  const std::size_t n = xs.size();
  if (n == 0) return 0.0;

  auto binner = [bins](const std::vector<double>& v) -> std::optional<std::vector<std::size_t>> {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (!(*hi > *lo)) return std::nullopt;
    const double width = (*hi - *lo) / static_cast<double>(bins);
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double pos = std::floor((v[i] - *lo) / width);
      idx[i] = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    }
    return idx;
  };
  const auto bx = binner(xs);
  const auto by = binner(ys);
  if (!bx || !by) return 0.0;

  std::vector<double> joint(bins * bins, 0.0), px(bins, 0.0), py(bins, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    joint[(*bx)[i] * bins + (*by)[i]] += 1.0;
    px[(*bx)[i]] += 1.0;
    py[(*by)[i]] += 1.0;
  }
  const double dn = static_cast<double>(n);
  double mi = 0;
  for (std::size_t a = 0; a < bins; ++a) {
    for (std::size_t b = 0; b < bins; ++b) {
      const double c = joint[a * bins + b];
      if (c == 0) continue;
      mi += (c / dn) * std::log((c * dn) / (px[a] * py[b]));
    }
  }
  return std::max(0.0, mi);
}

std::optional<double> non_uniformity(std::span<const double> y) {
  if (y.size() < 2) return std::nullopt;
  std::vector<double> uniform(y.size(), 1.0);
  return l1_normalized_distance(y, uniform);
}

std::optional<double> non_uniformity(const AggregatedData& agg) {
  if (agg.empty) return std::nullopt;
  return non_uniformity(flatten(agg));
}

std::optional<double> deviation(std::span<const double> filtered, std::span<const double> overall) {
  if (filtered.size() != overall.size() || filtered.empty()) return std::nullopt;
  return l1_normalized_distance(filtered, overall);
}

std::pair<std::vector<double>, std::vector<double>> align(const AggregatedData& a,
                                                          const AggregatedData& b) {
  // (series key, x label) -> (a value, b value)
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> cells;
  auto put = [&cells](const AggregatedData& agg, bool first) {
    for (const auto& s : agg.series) {
      const std::string key = s.key.value_or("");
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        auto& cell = cells[{key, agg.x_labels[i]}];
        (first ? cell.first : cell.second) = s.values[i];
      }
    }
  };
  put(a, true);
  put(b, false);
  std::pair<std::vector<double>, std::vector<double>> out;
  out.first.reserve(cells.size());
  out.second.reserve(cells.size());
  for (const auto& [key, v] : cells) {
    out.first.push_back(v.first);
    out.second.push_back(v.second);
  }
  return out;
}

std::optional<double> deviation(const AggregatedData& filtered, const AggregatedData& overall) {
  if (filtered.empty || overall.empty) return std::nullopt;
  const auto [f, o] = align(filtered, overall);
  return deviation(f, o);
}

std::optional<double> separability(std::span<const double> x, std::span<const double> y,
                                   std::span<const std::int32_t> labels, std::size_t sample_cap) {
  const std::size_t total = std::min({x.size(), y.size(), labels.size()});
  std::vector<std::size_t> pick;
  if (sample_cap > 0 && total > sample_cap) {
    pick.reserve(sample_cap);
    for (std::size_t i = 0; i < sample_cap; ++i) pick.push_back(i * total / sample_cap);
  } else {
    pick.resize(total);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
  }
  const std::size_t n = pick.size();

  std::vector<double> xs(n), ys(n);
  std::vector<std::int32_t> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[pick[i]];
    ys[i] = y[pick[i]];
    raw[i] = labels[pick[i]];
  }
  // compact the labels to 0..L-1
  std::vector<std::int32_t> distinct = raw;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const std::size_t L = distinct.size();
  if (L < 2 || L >= n) return std::nullopt;
  std::vector<std::size_t> lab(n), size(L, 0);
  for (std::size_t i = 0; i < n; ++i) {
    lab[i] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), raw[i]) -
                                      distinct.begin());
    ++size[lab[i]];
  }

  const auto nx = min_max_normalized(xs);
  const auto ny = min_max_normalized(ys);

  double total_s = 0;
  std::vector<double> sums(L);
  for (std::size_t i = 0; i < n; ++i) {
    if (size[lab[i]] < 2) continue;  // singleton cluster scores 0
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = nx[i] - nx[j], dy = ny[i] - ny[j];
      sums[lab[j]] += std::sqrt(dx * dx + dy * dy);
    }
    const double a = sums[lab[i]] / static_cast<double>(size[lab[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < L; ++c) {
      if (c == lab[i]) continue;
      b = std::min(b, sums[c] / static_cast<double>(size[c]));
    }
    const double denom = std::max(a, b);
    if (denom > 0) total_s += (b - a) / denom;
  }
  return total_s / static_cast<double>(n);
}

double euclidean_similarity(std::span<const double> a, std::span<const double> b) {
  const auto na = min_max_normalized(a);
  const auto nb = min_max_normalized(b);
  double ss = 0;
  for (std::size_t i = 0; i < std::min(na.size(), nb.size()); ++i) {
    const double d = na[i] - nb[i];
    ss += d * d;
  }
  return std::sqrt(ss);
}

std::optional<double> euclidean_similarity(const AggregatedData& a, const AggregatedData& b) {
  if (a.empty || b.empty) return std::nullopt;
  const auto [va, vb] = align(a, b);
  if (va.empty()) return std::nullopt;
  return euclidean_similarity(va, vb);
}

Scorer::Scorer(const Dataset& ds, const VizSpec* current, ScoringConfig config)
    : ds_(ds), current_(current), config_(config) {}

const AggregatedData& Scorer::current_data() {
  if (!current_data_) current_data_ = aggregate(ds_, *current_);
  return *current_data_;
}

const AggregatedData& Scorer::overall_for(const VizSpec& filtered) {
  VizSpec overall = filtered;
  overall.filters.clear();
  const std::string key = canonical_key(overall);
  for (const auto& [k, data] : overall_cache_)
    if (k == key) return data;
  overall_cache_.emplace_back(key, aggregate(ds_, overall));
  return overall_cache_.back().second;
}

ScoreOutcome Scorer::score(const VizSpec& candidate, CategoryKind category) {
  const bool scatter = candidate.mark == Mark::scatter;
  const bool colored = candidate.channels.color.has_value();

  // uncolored, unfiltered scatter under Spearman reads the dataset's memoized matrix
  if (scatter && !colored && candidate.filters.empty() && category != CategoryKind::similarity &&
      category != CategoryKind::distribution && config_.metric == CorrelationMetric::spearman) {
    const auto& cm = ds_.correlations();
    const auto i = cm.index_of(candidate.channels.x);
    const auto j = cm.index_of(*candidate.channels.y);
    if (i && j) {
      const double rho = cm.at(*i, *j);
      const Objective obj =
          category == CategoryKind::correlation ? Objective::monotonicity : Objective::correlation;
      if (std::isnan(rho)) return DropReason::zero_variance;
      return InterestingnessScore{std::abs(rho), obj, true};
    }
  }

  const AggregatedData data = aggregate(ds_, candidate);
  if (data.empty) return DropReason::empty_result;

  if (category == CategoryKind::similarity) {
    if (!current_) throw std::invalid_argument("Similarity scoring needs a current view");
    const AggregatedData& cur = current_data();
    if (cur.empty) return DropReason::empty_result;
    return drop_or(euclidean_similarity(data, cur), Objective::similarity_distance, false,
                   DropReason::too_few_values);
  }

  if (category == CategoryKind::distribution) {
    if (candidate.mark == Mark::histogram) {
      const auto rows = matching_rows(ds_, candidate);
      const auto col = ds_.numeric(ds_.require(candidate.channels.x));
      std::vector<double> values;
      values.reserve(rows ? rows->size() : 0);
      if (rows)
        for (auto r : *rows) values.push_back(col[r]);
      return drop_or(skewness(values), Objective::skew, true,
                     values.size() < 3 ? DropReason::too_few_values : DropReason::zero_variance);
    }
    if (!scatter) {
      const auto counts = flatten(data);
      return drop_or(skewness(counts), Objective::skew, true,
                     counts.size() < 3 ? DropReason::too_few_values : DropReason::zero_variance);
    }
  }

  if (scatter) {
    if (colored) {
      return drop_or(separability(data.px, data.py, data.point_group, config_.silhouette_cap),
                     Objective::separability, true, DropReason::single_label);
    }
    const Objective obj =
        category == CategoryKind::correlation ? Objective::monotonicity : Objective::correlation;
    if (data.px.size() < 3) return DropReason::too_few_values;
    if (config_.metric == CorrelationMetric::mutual_information)
      return drop_or(mutual_information(data.px, data.py, config_.mi_bins), obj, true,
                     DropReason::too_few_values);
    const auto rho = spearman(data.px, data.py);
    if (!rho) return DropReason::zero_variance;
    return drop_or(std::abs(*rho), obj, true, DropReason::zero_variance);
  }

  if (candidate.filters.empty()) {
    const auto flat = flatten(data);
    return drop_or(non_uniformity(flat), Objective::non_uniformity, true,
                   flat.size() < 2 ? DropReason::too_few_values : DropReason::all_zero);
  }
  const AggregatedData& overall = overall_for(candidate);
  return drop_or(deviation(data, overall), Objective::deviation, true, DropReason::all_zero);
}

ScoreOutcome score_viz(const VizSpec& candidate, const VizSpec* current, const Dataset& ds,
                       CategoryKind category, const ScoringConfig& config) {
  Scorer scorer(ds, current, config);
  return scorer.score(candidate, category);
}

}  // namespace nextviz
