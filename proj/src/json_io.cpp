#include "nextviz/json_io.hpp"

#include <algorithm>

#include "nextviz/errors.hpp"

namespace nextviz::json_io {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding \"") + name + "\"");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + name + "\"");
  return *it;
}

std::string string_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) throw ParseError(std::string("field \"") + name + "\" must be a string");
  return v.get<std::string>();
}

std::size_t count_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ParseError(std::string("field \"") + name + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<std::string> strings(const Json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) throw ParseError(std::string(what) + " must hold strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

std::vector<FilterPredicate> filters_from(const Json& v) {
  if (!v.is_array()) throw ParseError("filters must be an array");
  std::vector<FilterPredicate> out;
  for (const auto& f : v) out.push_back(filter_from_json(f));
  return out;
}

Json optional_string(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

Json pairs(const std::vector<std::pair<std::string, std::string>>& v) {
  Json out = Json::array();
  for (const auto& [a, b] : v) out.push_back(Json::array({a, b}));
  return out;
}

Json filter_list(const std::vector<FilterPredicate>& v) {
  Json out = Json::array();
  for (const auto& f : v) out.push_back(to_json(f));
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json category_json(const RecommendationCategory& cat, const Dataset* ds) {
  Json j;
  if (cat.category) {
    j["category"] = std::string(to_string(cat.category->kind));
    Json actions = Json::array();
    for (auto a : cat.category->sub_kinds) actions.push_back(std::string(to_string(a)));
    j["actions"] = std::move(actions);
  } else {
    j["category"] = nullptr;
  }
  j["k"] = cat.k;
  j["candidates"] = cat.candidates;
  j["dropped"] = cat.dropped;
  Json items = Json::array();
  for (const auto& item : cat.items) {
    Json i;
    i["key"] = item.key;
    i["action"] = std::string(to_string(item.action));
    i["spec"] = to_json(item.spec);
    i["score"] = to_json(item.score);
    i["diff"] = to_json(item.diff);
    if (ds) i["data"] = to_json(aggregate(*ds, item.spec));
    items.push_back(std::move(i));
  }
  j["items"] = std::move(items);
  return j;
}

template <typename F>
auto rethrow_as_parse_error(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

Json to_json(const FilterPredicate& f) { return Json{{"attr", f.attr}, {"value", f.value}}; }

Json to_json(const VizSpec& spec) {
  Json j;
  j["attrs"] = spec.attrs;
  j["filters"] = filter_list(spec.filters);
  j["mark"] = std::string(to_string(spec.mark));
  Json channels = Json::object();
  channels[spec.channels.x] = "x";
  if (spec.channels.y) channels[*spec.channels.y] = "y";
  if (spec.channels.color) channels[*spec.channels.color] = "color";
  j["channels"] = std::move(channels);
  j["agg"] = std::string(to_string(spec.agg));
  return j;
}

Json to_json(const SpecDiff& d) {
  Json j;
  j["added_attrs"] = d.added_attrs;
  j["removed_attrs"] = d.removed_attrs;
  j["swapped_attrs"] = pairs(d.swapped_attrs);
  j["added_filters"] = filter_list(d.added_filters);
  j["removed_filters"] = filter_list(d.removed_filters);
  Json swapped = Json::array();
  for (const auto& [from, to] : d.swapped_filters)
    swapped.push_back(Json{{"from", to_json(from)}, {"to", to_json(to)}});
  j["swapped_filters"] = std::move(swapped);
  return j;
}

Json to_json(const InterestingnessScore& s) {
  return Json{{"value", s.value},
              {"objective", std::string(to_string(s.objective))},
              {"higher_is_better", s.higher_is_better}};
}

Json to_json(const AggregatedData& d) {
  Json j;
  j["empty"] = d.empty;
  j["n_underlying"] = d.n_underlying;
  j["x_labels"] = d.x_labels;
  if (!d.bin_edges.empty()) j["bin_edges"] = d.bin_edges;
  Json series = Json::array();
  for (const auto& s : d.series)
    series.push_back(Json{{"key", optional_string(s.key)}, {"values", s.values}});
  j["series"] = std::move(series);
  if (!d.px.empty()) {
    const std::size_t n = d.px.size();
    const std::size_t shown = std::min(n, kMaxPoints);
    Json xs = Json::array(), ys = Json::array(), groups = Json::array();
    for (std::size_t i = 0; i < shown; ++i) {
      const std::size_t r = shown == n ? i : i * n / shown;
      xs.push_back(d.px[r]);
      ys.push_back(d.py[r]);
      if (!d.point_group.empty()) groups.push_back(d.point_group[r]);
    }
    Json points;
    points["total"] = n;
    points["x"] = std::move(xs);
    points["y"] = std::move(ys);
    if (!d.point_group.empty()) points["group"] = std::move(groups);
    j["points"] = std::move(points);
  }
  if (!d.group_labels.empty()) j["group_labels"] = d.group_labels;
  return j;
}

Json to_json(const ColumnMeta& m) {
  Json j;
  j["name"] = m.name;
  j["dtype"] = std::string(to_string(m.dtype));
  j["role"] = std::string(to_string(m.role));
  j["cardinality"] = m.cardinality;
  j["min"] = optional_number(m.min);
  j["max"] = optional_number(m.max);
  j["default_agg"] = std::string(to_string(m.default_agg));
  return j;
}

Json to_json(const ColumnStats& s) {
  Json j;
  j["count"] = s.count;
  j["cardinality"] = s.cardinality;
  j["min"] = optional_number(s.min);
  j["max"] = optional_number(s.max);
  j["mean"] = optional_number(s.mean);
  j["std"] = optional_number(s.std);
  if (!s.values.empty()) j["values"] = s.values;
  return j;
}

Json to_json(const RecommendationSet& set, const Dataset* ds) {
  Json j;
  j["mode"] = std::string(to_string(set.mode));
  j["view"] = set.view ? to_json(*set.view) : Json(nullptr);
  Json cats = Json::array();
  for (const auto& c : set.categories) cats.push_back(category_json(c, ds));
  j["categories"] = std::move(cats);
  return j;
}

FilterPredicate filter_from_json(const Json& j) {
  return {string_field(j, "attr"), string_field(j, "value")};
}

VizSpec spec_from_json(const Json& j) {
  return rethrow_as_parse_error([&] {
    VizSpec spec;
    spec.attrs = strings(field(j, "attrs"), "attrs");
    spec.filters = filters_from(field(j, "filters"));
    spec.mark = parse_mark(string_field(j, "mark"));
    const Json& channels = field(j, "channels");
    if (!channels.is_object()) throw ParseError("channels must be an object");
    bool has_x = false;
    for (const auto& [attr, ch] : channels.items()) {
      if (!ch.is_string()) throw ParseError("channel names must be strings");
      const std::string c = ch.get<std::string>();
      if (c == "x") {
        spec.channels.x = attr;
        has_x = true;
      } else if (c == "y") {
        spec.channels.y = attr;
      } else if (c == "color") {
        spec.channels.color = attr;
      } else {
        throw ParseError("unknown channel: " + c);
      }
    }
    if (!has_x) throw ParseError("channels must assign x");
    spec.agg = parse_aggregation(string_field(j, "agg"));
    return spec;
  });
}

SpecDiff diff_from_json(const Json& j) {
  return rethrow_as_parse_error([&] {
    SpecDiff d;
    d.added_attrs = strings(field(j, "added_attrs"), "added_attrs");
    d.removed_attrs = strings(field(j, "removed_attrs"), "removed_attrs");
    for (const auto& p : field(j, "swapped_attrs")) {
      auto both = strings(p, "swapped_attrs entry");
      if (both.size() != 2) throw ParseError("swapped_attrs entries are pairs");
      d.swapped_attrs.emplace_back(both[0], both[1]);
    }
    d.added_filters = filters_from(field(j, "added_filters"));
    d.removed_filters = filters_from(field(j, "removed_filters"));
    for (const auto& p : field(j, "swapped_filters"))
      d.swapped_filters.emplace_back(filter_from_json(field(p, "from")),
                                     filter_from_json(field(p, "to")));
    return d;
  });
}

InterestingnessScore score_from_json(const Json& j) {
  return rethrow_as_parse_error([&] {
    InterestingnessScore s;
    const Json& v = field(j, "value");
    if (!v.is_number()) throw ParseError("score value must be a number");
    s.value = v.get<double>();
    s.objective = parse_objective(string_field(j, "objective"));
    const Json& hib = field(j, "higher_is_better");
    if (!hib.is_boolean()) throw ParseError("higher_is_better must be a boolean");
    s.higher_is_better = hib.get<bool>();
    return s;
  });
}

RecommendationSet recommendation_set_from_json(const Json& j) {
  return rethrow_as_parse_error([&] {
    RecommendationSet set;
    set.mode = parse_mode(string_field(j, "mode"));
    const Json& view = field(j, "view");
    if (!view.is_null()) set.view = spec_from_json(view);
    for (const auto& c : field(j, "categories")) {
      RecommendationCategory cat;
      const Json& name = field(c, "category");
      if (!name.is_null()) {
        if (!name.is_string()) throw ParseError("category must be a string or null");
        cat.category = ActionCategory::of(parse_category_kind(name.get<std::string>()));
      }
      cat.k = count_field(c, "k");
      cat.candidates = count_field(c, "candidates");
      cat.dropped = count_field(c, "dropped");
      for (const auto& i : field(c, "items")) {
        RecommendationItem item;
        item.key = string_field(i, "key");
        item.action = parse_action(string_field(i, "action"));
        item.spec = spec_from_json(field(i, "spec"));
        item.score = score_from_json(field(i, "score"));
        item.diff = diff_from_json(field(i, "diff"));
        cat.items.push_back(std::move(item));
      }
      set.categories.push_back(std::move(cat));
    }
    return set;
  });
}

std::optional<VizSpec> view_from_request(const Json& j, const Dataset& ds) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_object()) throw ParseError("a view must be an object or null");
  std::vector<std::string> attrs;
  if (auto it = j.find("attrs"); it != j.end()) attrs = strings(*it, "attrs");

  std::vector<FilterPredicate> filters;
  if (auto it = j.find("filters"); it != j.end()) {
    if (!it->is_array()) throw ParseError("filters must be an array");
    for (const auto& f : *it) {
      const std::string attr = string_field(f, "attr");
      const Json& v = field(f, "value");
      std::string value;
      if (v.is_string()) {
        value = v.get<std::string>();
      } else if (v.is_number()) {
        value = format_number(v.get<double>());
      } else {
        throw ParseError("filter values must be strings or numbers");
      }
      filters.push_back({attr, value});
    }
  }
  if (attrs.empty()) {
    if (!filters.empty()) throw UnsupportedSpec("a filter needs at least one attribute in the view");
    return std::nullopt;
  }

  VizSpec spec = encode(ds, std::move(attrs), std::move(filters));
  for (const auto& f : spec.filters)
    if (!ds.code_of(ds.require(f.attr), f.value))
      throw UnsupportedSpec("column " + f.attr + " has no value " + f.value);
  return spec;
}

Json schema_json(const Dataset& ds) {
  Json j;
  j["row_count"] = ds.row_count();
  Json cols = Json::array();
  for (const auto& m : ds.columns()) {
    Json c = to_json(m);
    c["stats"] = to_json(column_stats(ds, m.name));
    cols.push_back(std::move(c));
  }
  j["columns"] = std::move(cols);
  return j;
}

}  // namespace nextviz::json_io
