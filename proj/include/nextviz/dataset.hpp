#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nextviz {

enum class DataType { quantitative, nominal, ordinal, temporal };
enum class Role { measure, dimension };
enum class Aggregation { none, count, mean, sum };

std::string_view to_string(DataType t);
std::string_view to_string(Role r);
std::string_view to_string(Aggregation a);
DataType parse_data_type(std::string_view s);
Role parse_role(std::string_view s);
Aggregation parse_aggregation(std::string_view s);

struct ColumnMeta {
  std::string name;
  DataType dtype = DataType::nominal;
  Role role = Role::dimension;
  std::size_t cardinality = 0;  // distinct non-null values
  std::optional<double> min;    // quantitative: value; temporal: days since epoch
  std::optional<double> max;
  Aggregation default_agg = Aggregation::count;

  bool is_measure() const { return role == Role::measure; }
  bool operator==(const ColumnMeta&) const = default;
};

/// A column exactly as read from the source; nullopt marks a null cell.
struct RawColumn {
  std::string name;
  std::vector<std::optional<std::string>> cells;
};

struct ColumnOverride {
  std::optional<DataType> dtype;
  std::optional<Role> role;
};
using SchemaOverrides = std::map<std::string, ColumnOverride, std::less<>>;

struct LoadOptions {
  SchemaOverrides overrides;
};

/// Minimum cardinality a numeric column needs before it is treated as a
/// measure: max(12, 1% of rows).
double measure_cardinality_threshold(std::size_t row_count);

/// ISO-style date (YYYY-MM-DD or YYYY/MM/DD, optional HH:MM[:SS]) to
/// fractional days since 1970-01-01. nullopt when not on the whitelist.
std::optional<double> parse_temporal(std::string_view s);

std::optional<double> parse_number(std::string_view s);

/// Shortest round-trip text for a double ("8" for 8.0).
std::string format_number(double v);

std::vector<ColumnMeta> infer_schema(std::span<const RawColumn> raw);

/// Pairwise Spearman correlations between measures, row-major, NaN where
/// undefined off the diagonal. Symmetric with unit diagonal.
struct CorrelationMatrix {
  std::vector<std::string> measures;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * measures.size() + j]; }
  std::optional<std::size_t> index_of(std::string_view name) const;
};

/// Immutable in-memory table. Measures are stored as doubles (NaN for null),
/// dimensions as dictionary codes (-1 for null) into a sorted label list.
class Dataset {
 public:
  static std::shared_ptr<const Dataset> from_columns(std::vector<RawColumn> raw,
                                                     const SchemaOverrides& overrides = {});

  const std::vector<ColumnMeta>& columns() const { return meta_; }
  std::size_t row_count() const { return row_count_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Throws UnknownColumn.
  std::size_t require(std::string_view name) const;
  const ColumnMeta& meta(std::string_view name) const { return meta_[require(name)]; }

  /// Measure storage; empty span for dimensions.
  std::span<const double> numeric(std::size_t col) const { return store_[col].numbers; }
  /// Dimension storage; empty span for measures.
  std::span<const std::int32_t> codes(std::size_t col) const { return store_[col].codes; }
  /// Sorted distinct labels of a dimension (numeric order for ordinal,
  /// chronological for temporal, bytewise otherwise).
  const std::vector<std::string>& labels(std::size_t col) const { return store_[col].labels; }
  /// Numeric sort key per label (NaN for nominal labels).
  std::span<const double> label_keys(std::size_t col) const { return store_[col].label_keys; }
  std::optional<std::int32_t> code_of(std::size_t col, std::string_view label) const;

  std::vector<std::string> measure_names() const;
  std::vector<std::string> dimension_names() const;

  /// Computed on first use and memoized; safe to call concurrently.
  const CorrelationMatrix& correlations() const;

  struct Storage {
    std::vector<double> numbers;
    std::vector<std::int32_t> codes;
    std::vector<std::string> labels;
    std::vector<double> label_keys;  // numeric sort key per label (ordinal/temporal)
  };

 private:
  Dataset() = default;

  std::vector<ColumnMeta> meta_;
  std::vector<Storage> store_;
  std::size_t row_count_ = 0;

  mutable std::once_flag corr_once_;
  mutable std::unique_ptr<CorrelationMatrix> corr_;
};

using DatasetPtr = std::shared_ptr<const Dataset>;

/// RFC-4180 CSV with a header row. Throws ParseError on empty input,
/// duplicate column names, or no data rows.
std::vector<RawColumn> read_csv(std::istream& in);
DatasetPtr load_csv(std::istream& in, const LoadOptions& options = {});
DatasetPtr load_csv(std::string_view text, const LoadOptions& options = {});
DatasetPtr load_csv_file(const std::string& path, const LoadOptions& options = {});

/// Sidecar JSON: {"Col": {"dtype": "ordinal", "role": "dimension"}, ...}
SchemaOverrides parse_schema_overrides(std::string_view json_text);

struct ColumnStats {
  std::string name;
  std::size_t count = 0;  // non-null values
  std::size_t cardinality = 0;
  std::optional<double> min, max, mean, std;  // population std
  std::vector<std::string> values;            // dimensions only, sorted
};

/// Throws UnknownColumn.
ColumnStats column_stats(const Dataset& ds, std::string_view col);

}  // namespace nextviz
