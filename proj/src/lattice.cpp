#include "nextviz/lattice.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "nextviz/errors.hpp"

namespace nextviz {

namespace {

std::optional<VizSpec> try_encode(const Dataset& ds, std::vector<std::string> attrs,
                                  std::vector<FilterPredicate> filters) {
  try {
    return encode(ds, std::move(attrs), std::move(filters));
  } catch (const UnsupportedSpec&) {
    return std::nullopt;
  }
}

std::vector<std::string> without(const std::vector<std::string>& v, const std::string& drop) {
  std::vector<std::string> out;
  for (const auto& s : v)
    if (s != drop) out.push_back(s);
  return out;
}

std::vector<std::string> with(std::vector<std::string> v, const std::string& add) {
  v.push_back(add);
  return v;
}

std::vector<FilterPredicate> replace_filter(const std::vector<FilterPredicate>& filters,
                                            const FilterPredicate& next) {
  std::vector<FilterPredicate> out;
  for (const auto& f : filters) out.push_back(f.attr == next.attr ? next : f);
  return out;
}

/// Sorted by canonical key, deduplicated, the view itself removed.
class Collector {
 public:
  explicit Collector(const VizSpec* view) {
    if (view) view_key_ = canonical_key(*view);
  }

  void add(std::optional<VizSpec> spec, Action action) {
    if (!spec) return;
    std::string key = canonical_key(*spec);
    if (key == view_key_) return;
    items_.emplace(std::move(key), Candidate{std::move(*spec), action});
  }

  std::vector<Candidate> take() {
    std::vector<Candidate> out;
    out.reserve(items_.size());
    for (auto& [key, c] : items_) out.push_back(std::move(c));
    return out;
  }

 private:
  std::string view_key_;
  std::map<std::string, Candidate> items_;
};

bool filterable(const ColumnMeta& m, const LatticeOptions& options) {
  return m.role == Role::dimension && m.cardinality >= 1 && m.cardinality <= options.cardinality_cap;
}

/// Columns free to enter the view: not plotted, not filtered.
std::vector<std::string> free_columns(const VizSpec& view, const Dataset& ds) {
  std::vector<std::string> out;
  for (const auto& m : ds.columns())
    if (!view.has_attr(m.name) && !view.filter_on(m.name)) out.push_back(m.name);
  return out;
}

void add_filters(const VizSpec& view, const Dataset& ds, const LatticeOptions& options,
                 Collector& out) {
  for (std::size_t c = 0; c < ds.columns().size(); ++c) {
    const ColumnMeta& m = ds.columns()[c];
    if (!filterable(m, options) || view.has_attr(m.name) || view.filter_on(m.name)) continue;
    for (const auto& value : ds.labels(c)) {
      auto filters = view.filters;
      filters.push_back({m.name, value});
      out.add(try_encode(ds, view.attrs, std::move(filters)), Action::filter_add);
    }
  }
}

void swap_filters(const VizSpec& view, const Dataset& ds, Collector& out) {
  for (const auto& f : view.filters) {
    const std::size_t c = ds.require(f.attr);
    for (const auto& value : ds.labels(c)) {
      if (value == f.value) continue;
      out.add(try_encode(ds, view.attrs, replace_filter(view.filters, {f.attr, value})),
              Action::filter_swap);
    }
  }
}

}  // namespace

std::string_view to_string(CategoryKind k) {
  switch (k) {
    case CategoryKind::enhance: return "Enhance";
    case CategoryKind::filter: return "Filter";
    case CategoryKind::generalize: return "Generalize";
    case CategoryKind::pivot: return "Pivot";
    case CategoryKind::correlation: return "Correlation";
    case CategoryKind::distribution: return "Distribution";
    case CategoryKind::similarity: return "Similarity";
  }
  return "Enhance";
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::enhance: return "enhance";
    case Action::filter_add: return "filter_add";
    case Action::filter_swap: return "filter_swap";
    case Action::generalize_attribute: return "generalize_attribute";
    case Action::generalize_value: return "generalize_value";
    case Action::pivot: return "pivot";
    case Action::correlation: return "correlation";
    case Action::distribution: return "distribution";
    case Action::similarity: return "similarity";
    case Action::difference: return "difference";
  }
  return "enhance";
}

CategoryKind parse_category_kind(std::string_view s) {
  for (auto k : {CategoryKind::enhance, CategoryKind::filter, CategoryKind::generalize,
                 CategoryKind::pivot, CategoryKind::correlation, CategoryKind::distribution,
                 CategoryKind::similarity})
    if (to_string(k) == s) return k;
  throw ParseError("unknown category: " + std::string(s));
}

Action parse_action(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Action::difference); ++i)
    if (to_string(static_cast<Action>(i)) == s) return static_cast<Action>(i);
  throw ParseError("unknown action: " + std::string(s));
}

ActionCategory ActionCategory::of(CategoryKind kind) {
  switch (kind) {
    case CategoryKind::enhance: return {kind, {Action::enhance}};
    case CategoryKind::filter: return {kind, {Action::filter_add, Action::filter_swap}};
    case CategoryKind::generalize:
      return {kind, {Action::generalize_attribute, Action::generalize_value}};
    case CategoryKind::pivot: return {kind, {Action::pivot}};
    case CategoryKind::correlation: return {kind, {Action::correlation}};
    case CategoryKind::distribution: return {kind, {Action::distribution}};
    case CategoryKind::similarity: return {kind, {Action::similarity, Action::difference}};
  }
  return {kind, {}};
}

bool is_operational(CategoryKind k) {
  return k == CategoryKind::enhance || k == CategoryKind::filter || k == CategoryKind::generalize ||
         k == CategoryKind::pivot;
}

std::vector<Candidate> enhance(const VizSpec& view, const Dataset& ds) {
  Collector out(&view);
  if (view.attrs.empty() || view.attrs.size() >= 3) return out.take();
  for (const auto& name : free_columns(view, ds))
    out.add(try_encode(ds, with(view.attrs, name), view.filters), Action::enhance);
  return out.take();
}

std::vector<Candidate> filter_add(const VizSpec& view, const Dataset& ds, const LatticeOptions& options) {
  Collector out(&view);
  if (!view.attrs.empty()) add_filters(view, ds, options, out);
  return out.take();
}

std::vector<Candidate> filter_swap(const VizSpec& view, const Dataset& ds) {
  Collector out(&view);
  swap_filters(view, ds, out);
  return out.take();
}

std::vector<Candidate> generalize(const VizSpec& view, const Dataset& ds) {
  Collector out(&view);
  if (view.attrs.size() >= 2)
    for (const auto& a : view.attrs)
      out.add(try_encode(ds, without(view.attrs, a), view.filters), Action::generalize_attribute);
  for (const auto& f : view.filters) {
    std::vector<FilterPredicate> rest;
    for (const auto& g : view.filters)
      if (g != f) rest.push_back(g);
    out.add(try_encode(ds, view.attrs, std::move(rest)), Action::generalize_value);
  }
  return out.take();
}

std::vector<Candidate> pivot(const VizSpec& view, const Dataset& ds) {
  Collector out(&view);
  const auto replacements = free_columns(view, ds);
  for (const auto& a : view.attrs)
    for (const auto& b : replacements)
      out.add(try_encode(ds, with(without(view.attrs, a), b), view.filters), Action::pivot);
  return out.take();
}

std::vector<Candidate> correlation_candidates(const Dataset& ds) {
  Collector out(nullptr);
  const auto measures = ds.measure_names();
  for (std::size_t i = 0; i < measures.size(); ++i)
    for (std::size_t j = i + 1; j < measures.size(); ++j)
      out.add(try_encode(ds, {measures[i], measures[j]}, {}), Action::correlation);
  return out.take();
}

std::vector<Candidate> distribution_candidates(const Dataset& ds, const LatticeOptions& options) {
  Collector out(nullptr);
  for (const auto& m : ds.columns()) {
    if (m.role == Role::measure || filterable(m, options))
      out.add(try_encode(ds, {m.name}, {}), Action::distribution);
  }
  return out.take();
}

std::vector<Candidate> similarity_candidates(const VizSpec& view, const Dataset& ds,
                                             const LatticeOptions& options) {
  Collector family(&view);
  if (view.attrs.empty() || view.mark == Mark::scatter) return family.take();

  if (view.channels.y) {
    const std::string& y = *view.channels.y;
    for (const auto& m : ds.measure_names()) {
      if (view.has_attr(m)) continue;
      family.add(try_encode(ds, with(without(view.attrs, y), m), view.filters), Action::similarity);
    }
  }
  add_filters(view, ds, options, family);

  // keep only charts directly comparable with the view
  Collector out(&view);
  for (auto& c : family.take()) {
    if (c.spec.mark != view.mark || c.spec.channels.x != view.channels.x ||
        c.spec.channels.color != view.channels.color)
      continue;
    out.add(std::move(c.spec), Action::similarity);
  }
  return out.take();
}

std::vector<Candidate> enumerate(CategoryKind kind, const std::optional<VizSpec>& view,
                                 const Dataset& ds, const LatticeOptions& options) {
  switch (kind) {
    case CategoryKind::correlation: return correlation_candidates(ds);
    case CategoryKind::distribution: return distribution_candidates(ds, options);
    default: break;
  }
  if (!view || view->attrs.empty()) return {};
  switch (kind) {
    case CategoryKind::enhance: return enhance(*view, ds);
    case CategoryKind::filter:
      return view->filters.empty() ? filter_add(*view, ds, options) : filter_swap(*view, ds);
    case CategoryKind::generalize: return generalize(*view, ds);
    case CategoryKind::pivot: return pivot(*view, ds);
    case CategoryKind::similarity: return similarity_candidates(*view, ds, options);
    default: return {};
  }
}

}  // namespace nextviz
