#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nextviz/dataset.hpp"
#include "nextviz/viz_spec.hpp"

namespace nextviz {

/// Consolidated recommendation categories shown to the user.
enum class CategoryKind { enhance, filter, generalize, pivot, correlation, distribution, similarity };

/// The ten analytical actions of the taxonomy.
enum class Action {
  enhance,
  filter_add,
  filter_swap,
  generalize_attribute,
  generalize_value,
  pivot,
  correlation,
  distribution,
  similarity,
  difference,
};

std::string_view to_string(CategoryKind k);
std::string_view to_string(Action a);
CategoryKind parse_category_kind(std::string_view s);
Action parse_action(std::string_view s);

struct ActionCategory {
  CategoryKind kind;
  std::vector<Action> sub_kinds;

  /// Filter = add + swap, Generalize = attribute + value,
  /// Similarity = similarity + difference; the rest are singletons.
  static ActionCategory of(CategoryKind kind);
  bool operator==(const ActionCategory&) const = default;
};

bool is_operational(CategoryKind k);

/// Where a view sits on the attribute and value hierarchies.
struct LatticePosition {
  std::vector<std::string> attr_node;
  std::vector<FilterPredicate> value_node;

  static LatticePosition of(const VizSpec& view) { return {view.attrs, view.filters}; }
};

struct LatticeOptions {
  std::size_t cardinality_cap = 50;  // largest dimension offered as a filter or distribution
};

struct Candidate {
  VizSpec spec;
  Action action;
};

// Every enumerator returns candidates sorted by canonical key, never
// including the view itself.

/// View plus one more attribute. Empty once the view has three attributes.
std::vector<Candidate> enhance(const VizSpec& view, const Dataset& ds);

/// View plus one filter attr=value on a dimension that is neither filtered
/// nor plotted and whose cardinality is within the cap.
std::vector<Candidate> filter_add(const VizSpec& view, const Dataset& ds,
                                  const LatticeOptions& options = {});

/// Each filter attr=v replaced by attr=v' for every other value v'.
std::vector<Candidate> filter_swap(const VizSpec& view, const Dataset& ds);

/// View minus one attribute (while at least one remains) or minus one filter.
std::vector<Candidate> generalize(const VizSpec& view, const Dataset& ds);

/// One plotted attribute replaced by an attribute outside the view.
std::vector<Candidate> pivot(const VizSpec& view, const Dataset& ds);

/// Uncolored scatterplot for every unordered pair of measures.
std::vector<Candidate> correlation_candidates(const Dataset& ds);

/// Histogram per measure, count chart per dimension within the cap.
std::vector<Candidate> distribution_candidates(const Dataset& ds, const LatticeOptions& options = {});

/// Charts with the view's mark, x and color whose y measure is replaced, or
/// which gain one filter. The view's filters are kept. Empty for
/// scatterplot views.
std::vector<Candidate> similarity_candidates(const VizSpec& view, const Dataset& ds,
                                             const LatticeOptions& options = {});

/// Category-level enumeration; Filter uses swap when the view carries a
/// filter and add otherwise. Context-dependent kinds return nothing for
/// an empty view.
std::vector<Candidate> enumerate(CategoryKind kind, const std::optional<VizSpec>& view,
                                 const Dataset& ds, const LatticeOptions& options = {});

}  // namespace nextviz
