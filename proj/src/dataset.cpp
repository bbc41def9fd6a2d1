#include "nextviz/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "nextviz/errors.hpp"
#include "nextviz/stats.hpp"

namespace nextviz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s, std::size_t n) {
  if (s.size() < n) return false;
  return std::all_of(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n),
                     [](char c) { return c >= '0' && c <= '9'; });
}

int to_int(std::string_view s) {
  int v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

enum class Kind { empty, numeric, temporal, text };

Kind classify(const RawColumn& col) {
  bool any = false, numeric = true, temporal = true;
  for (const auto& cell : col.cells) {
    if (!cell) continue;
    any = true;
    if (numeric && !parse_number(*cell)) numeric = false;
    if (temporal && !parse_temporal(*cell)) temporal = false;
    if (!numeric && !temporal) return Kind::text;
  }
  if (!any) return Kind::empty;
  return numeric ? Kind::numeric : Kind::temporal;
}

void finalize_meta(ColumnMeta& m, const Dataset::Storage& s) {
  m.min.reset();
  m.max.reset();
  if (m.role == Role::measure) {
    std::set<double> distinct;
    for (double v : s.numbers) {
      if (std::isnan(v)) continue;
      distinct.insert(v);
    }
    m.cardinality = distinct.size();
    if (!distinct.empty()) {
      m.min = *distinct.begin();
      m.max = *distinct.rbegin();
    }
    return;
  }
  m.cardinality = s.labels.size();
  if ((m.dtype == DataType::temporal || m.dtype == DataType::quantitative) && !s.labels.empty()) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double k : s.label_keys) {
      if (std::isnan(k)) continue;
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    if (lo <= hi) {
      m.min = lo;
      m.max = hi;
    }
  }
}

Dataset::Storage build_storage(const RawColumn& raw, const ColumnMeta& m) {
  Dataset::Storage s;
  const std::size_t n = raw.cells.size();
  if (m.role == Role::measure) {
    s.numbers.resize(n, kNaN);
    bool any_text = false, any_number = false;
    for (std::size_t r = 0; r < n; ++r) {
      if (!raw.cells[r]) continue;
      if (auto v = parse_number(*raw.cells[r])) {
        s.numbers[r] = *v;
        any_number = true;
      } else {
        any_text = true;
      }
    }
    if (any_text && !any_number) throw ParseError("column " + raw.name + " has no numeric values for a measure");
    return s;
  }

  // label text plus numeric sort key per cell
  std::vector<std::optional<std::pair<std::string, double>>> cells(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!raw.cells[r]) continue;
    const std::string& text = *raw.cells[r];
    switch (m.dtype) {
      case DataType::temporal:
        if (auto d = parse_temporal(text)) cells[r] = std::pair{std::string(trim(text)), *d};
        break;
      case DataType::ordinal:
      case DataType::quantitative:
        if (auto v = parse_number(text)) {
          cells[r] = std::pair{format_number(*v), *v};
        } else {
          cells[r] = std::pair{text, kNaN};
        }
        break;
      case DataType::nominal:
        cells[r] = std::pair{text, kNaN};
        break;
    }
  }

  std::vector<std::pair<std::string, double>> distinct;
  {
    std::unordered_map<std::string, double> seen;
    for (const auto& c : cells)
      if (c) seen.emplace(c->first, c->second);
    distinct.assign(seen.begin(), seen.end());
  }
  std::sort(distinct.begin(), distinct.end(), [](const auto& a, const auto& b) {
    const bool an = std::isnan(a.second), bn = std::isnan(b.second);
    if (an != bn) return !an;  // keyed labels first
    if (!an && a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  std::unordered_map<std::string, std::int32_t> code;
  for (const auto& [label, key] : distinct) {
    code.emplace(label, static_cast<std::int32_t>(s.labels.size()));
    s.labels.push_back(label);
    s.label_keys.push_back(key);
  }
  s.codes.resize(n, -1);
  for (std::size_t r = 0; r < n; ++r)
    if (cells[r]) s.codes[r] = code.at(cells[r]->first);
  return s;
}

}  // namespace

std::string_view to_string(DataType t) {
  switch (t) {
    case DataType::quantitative: return "quantitative";
    case DataType::nominal: return "nominal";
    case DataType::ordinal: return "ordinal";
    case DataType::temporal: return "temporal";
  }
  return "nominal";
}

std::string_view to_string(Role r) { return r == Role::measure ? "measure" : "dimension"; }

std::string_view to_string(Aggregation a) {
  switch (a) {
    case Aggregation::none: return "none";
    case Aggregation::count: return "count";
    case Aggregation::mean: return "mean";
    case Aggregation::sum: return "sum";
  }
  return "none";
}

DataType parse_data_type(std::string_view s) {
  if (s == "quantitative") return DataType::quantitative;
  if (s == "nominal") return DataType::nominal;
  if (s == "ordinal") return DataType::ordinal;
  if (s == "temporal") return DataType::temporal;
  throw ParseError("unknown dtype: " + std::string(s));
}

Role parse_role(std::string_view s) {
  if (s == "measure") return Role::measure;
  if (s == "dimension") return Role::dimension;
  throw ParseError("unknown role: " + std::string(s));
}

Aggregation parse_aggregation(std::string_view s) {
  for (auto a : {Aggregation::none, Aggregation::count, Aggregation::mean, Aggregation::sum})
    if (to_string(a) == s) return a;
  throw ParseError("unknown aggregation: " + std::string(s));
}

double measure_cardinality_threshold(std::size_t row_count) {
  return std::max(12.0, 0.01 * static_cast<double>(row_count));
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string format_number(double v) {
  if (v == 0) v = 0;  // fold -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::optional<double> parse_temporal(std::string_view s) {
  s = trim(s);
  if (s.size() < 10 || !all_digits(s, 4)) return std::nullopt;
  const char sep = s[4];
  if ((sep != '-' && sep != '/') || s[7] != sep) return std::nullopt;
  if (!all_digits(s.substr(5), 2) || !all_digits(s.substr(8), 2)) return std::nullopt;
  using namespace std::chrono;
  const year_month_day ymd{year{to_int(s.substr(0, 4))},
                           month{static_cast<unsigned>(to_int(s.substr(5, 2)))},
                           day{static_cast<unsigned>(to_int(s.substr(8, 2)))}};
  if (!ymd.ok()) return std::nullopt;
  double days = static_cast<double>(sys_days{ymd}.time_since_epoch().count());
  std::string_view rest = s.substr(10);
  if (rest.empty()) return days;
  if (rest.front() != 'T' && rest.front() != ' ') return std::nullopt;
  rest.remove_prefix(1);
  if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
  if (rest.size() < 5 || !all_digits(rest, 2) || rest[2] != ':' || !all_digits(rest.substr(3), 2))
    return std::nullopt;
  const int hh = to_int(rest.substr(0, 2)), mm = to_int(rest.substr(3, 2));
  double ss = 0;
  rest.remove_prefix(5);
  if (!rest.empty()) {
    if (rest.front() != ':' || !all_digits(rest.substr(1), 2)) return std::nullopt;
    auto sec = parse_number(rest.substr(1));
    if (!sec) return std::nullopt;
    ss = *sec;
  }
  if (hh > 23 || mm > 59 || ss >= 61) return std::nullopt;
  return days + (hh * 3600.0 + mm * 60.0 + ss) / 86400.0;
}

std::vector<ColumnMeta> infer_schema(std::span<const RawColumn> raw) {
  std::vector<ColumnMeta> out;
  out.reserve(raw.size());
  for (const auto& col : raw) {
    ColumnMeta m;
    m.name = col.name;
    switch (classify(col)) {
      case Kind::empty:
        break;
      case Kind::numeric: {
        std::set<double> distinct;
        for (const auto& c : col.cells)
          if (c) distinct.insert(*parse_number(*c));
        m.cardinality = distinct.size();
        if (static_cast<double>(m.cardinality) > measure_cardinality_threshold(col.cells.size())) {
          m.dtype = DataType::quantitative;
          m.role = Role::measure;
          m.default_agg = Aggregation::mean;
          m.min = *distinct.begin();
          m.max = *distinct.rbegin();
        } else {
          m.dtype = DataType::ordinal;
        }
        break;
      }
      case Kind::temporal: {
        std::set<double> distinct;
        for (const auto& c : col.cells)
          if (c) distinct.insert(*parse_temporal(*c));
        m.dtype = DataType::temporal;
        m.cardinality = distinct.size();
        m.min = *distinct.begin();
        m.max = *distinct.rbegin();
        break;
      }
      case Kind::text: {
        std::set<std::string_view> distinct;
        for (const auto& c : col.cells)
          if (c) distinct.insert(*c);
        m.cardinality = distinct.size();
        break;
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::optional<std::size_t> CorrelationMatrix::index_of(std::string_view name) const {
  auto it = std::find(measures.begin(), measures.end(), name);
  if (it == measures.end()) return std::nullopt;
  return static_cast<std::size_t>(it - measures.begin());
}

DatasetPtr Dataset::from_columns(std::vector<RawColumn> raw, const SchemaOverrides& overrides) {
  if (raw.empty()) throw ParseError("dataset has no columns");
  const std::size_t rows = raw.front().cells.size();
  for (const auto& c : raw)
    if (c.cells.size() != rows) throw ParseError("column " + c.name + " has a different length");
  if (rows == 0) throw ParseError("no data rows");

  auto meta = infer_schema(raw);
  for (const auto& [name, ov] : overrides) {
    auto it = std::find_if(meta.begin(), meta.end(), [&](const ColumnMeta& m) { return m.name == name; });
    if (it == meta.end()) throw UnknownColumn(name);
    if (ov.dtype) it->dtype = *ov.dtype;
    if (ov.role) {
      it->role = *ov.role;
    } else if (ov.dtype) {
      it->role = *ov.dtype == DataType::quantitative ? Role::measure : Role::dimension;
    }
    if (it->role == Role::measure) {
      if (ov.dtype && *ov.dtype != DataType::quantitative)
        throw ParseError("override for " + name + ": a measure must be quantitative");
      it->dtype = DataType::quantitative;
      it->default_agg = Aggregation::mean;
    } else {
      it->default_agg = Aggregation::count;
    }
  }

  std::shared_ptr<Dataset> ds(new Dataset());
  ds->row_count_ = rows;
  ds->store_.reserve(raw.size());
  for (std::size_t c = 0; c < raw.size(); ++c) {
    ds->store_.push_back(build_storage(raw[c], meta[c]));
    finalize_meta(meta[c], ds->store_.back());
  }
  ds->meta_ = std::move(meta);
  return ds;
}

std::optional<std::size_t> Dataset::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < meta_.size(); ++i)
    if (meta_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Dataset::require(std::string_view name) const {
  if (auto i = index_of(name)) return *i;
  throw UnknownColumn(std::string(name));
}

std::optional<std::int32_t> Dataset::code_of(std::size_t col, std::string_view label) const {
  const auto& labels = store_[col].labels;
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::int32_t>(it - labels.begin());
}

std::vector<std::string> Dataset::measure_names() const {
  std::vector<std::string> out;
  for (const auto& m : meta_)
    if (m.role == Role::measure) out.push_back(m.name);
  return out;
}

std::vector<std::string> Dataset::dimension_names() const {
  std::vector<std::string> out;
  for (const auto& m : meta_)
    if (m.role == Role::dimension) out.push_back(m.name);
  return out;
}

const CorrelationMatrix& Dataset::correlations() const {
  std::call_once(corr_once_, [this] {
    auto cm = std::make_unique<CorrelationMatrix>();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < meta_.size(); ++i) {
      if (meta_[i].role != Role::measure) continue;
      idx.push_back(i);
      cm->measures.push_back(meta_[i].name);
    }
    const std::size_t m = idx.size();
    cm->values.assign(m * m, kNaN);
    std::vector<double> xs, ys;
    for (std::size_t a = 0; a < m; ++a) {
      cm->values[a * m + a] = 1.0;
      for (std::size_t b = a + 1; b < m; ++b) {
        const auto x = numeric(idx[a]);
        const auto y = numeric(idx[b]);
        xs.clear();
        ys.clear();
        for (std::size_t r = 0; r < row_count_; ++r) {
          if (std::isnan(x[r]) || std::isnan(y[r])) continue;
          xs.push_back(x[r]);
          ys.push_back(y[r]);
        }
        const double rho = stats::spearman(xs, ys).value_or(kNaN);
        cm->values[a * m + b] = rho;
        cm->values[b * m + a] = rho;
      }
    }
    corr_ = std::move(cm);
  });
  return *corr_;
}

SchemaOverrides parse_schema_overrides(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schema override: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("schema override must be a JSON object");
  SchemaOverrides out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_object()) throw ParseError("schema override for " + it.key() + " must be an object");
    ColumnOverride ov;
    if (auto d = it.value().find("dtype"); d != it.value().end())
      ov.dtype = parse_data_type(d->get<std::string>());
    if (auto r = it.value().find("role"); r != it.value().end())
      ov.role = parse_role(r->get<std::string>());
    out.emplace(it.key(), ov);
  }
  return out;
}

ColumnStats column_stats(const Dataset& ds, std::string_view col) {
  const std::size_t c = ds.require(col);
  const ColumnMeta& m = ds.columns()[c];
  ColumnStats st;
  st.name = m.name;
  st.cardinality = m.cardinality;

  std::vector<double> vals;
  if (m.role == Role::measure) {
    for (double v : ds.numeric(c))
      if (!std::isnan(v)) vals.push_back(v);
    st.count = vals.size();
  } else {
    st.values = ds.labels(c);
    const auto keys = ds.label_keys(c);
    for (std::int32_t code : ds.codes(c)) {
      if (code < 0) continue;
      ++st.count;
      const double k = keys[static_cast<std::size_t>(code)];
      if (!std::isnan(k)) vals.push_back(k);
    }
  }
  if (!vals.empty()) {
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    st.min = *lo;
    st.max = *hi;
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
    double ss = 0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    st.mean = mean;
    st.std = std::sqrt(ss / static_cast<double>(vals.size()));
  }
  return st;
}

}  // namespace nextviz
