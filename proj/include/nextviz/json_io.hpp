#pragma once

#include <cstddef>
#include <optional>

#include <nlohmann/json.hpp>

#include "nextviz/aggregate.hpp"
#include "nextviz/dataset.hpp"
#include "nextviz/interestingness.hpp"
#include "nextviz/orchestrator.hpp"
#include "nextviz/viz_spec.hpp"

namespace nextviz::json_io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kProtocolVersion = "1";
/// Scatter points shipped per chart; larger charts are stride-sampled.
inline constexpr std::size_t kMaxPoints = 2000;

Json to_json(const FilterPredicate& f);
Json to_json(const VizSpec& spec);
Json to_json(const SpecDiff& diff);
Json to_json(const InterestingnessScore& score);
Json to_json(const AggregatedData& data);
Json to_json(const ColumnMeta& meta);
Json to_json(const ColumnStats& stats);

/// With ds set, every item carries its chart data under "data".
Json to_json(const RecommendationSet& set, const Dataset* ds = nullptr);

/// Structural decoding of the forms above. Throws ParseError.
FilterPredicate filter_from_json(const Json& j);
VizSpec spec_from_json(const Json& j);
SpecDiff diff_from_json(const Json& j);
InterestingnessScore score_from_json(const Json& j);
RecommendationSet recommendation_set_from_json(const Json& j);

/// A user-supplied view: only "attrs" and "filters" are read and the spec
/// is re-encoded against ds. Filter values may be strings or numbers and
/// must exist in the column. null or an empty attribute list means no view.
/// Throws ParseError for malformed JSON shapes, UnknownColumn and
/// UnsupportedSpec for specs the dataset cannot draw.
std::optional<VizSpec> view_from_request(const Json& j, const Dataset& ds);

/// {"row_count", "columns": [meta + stats]}
Json schema_json(const Dataset& ds);

}  // namespace nextviz::json_io
