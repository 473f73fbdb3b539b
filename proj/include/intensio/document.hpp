#ifndef INTENSIO_DOCUMENT_HPP
#define INTENSIO_DOCUMENT_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intensio/duality.hpp"
#include "intensio/neighborhood.hpp"
#include "intensio/relational.hpp"
#include "intensio/search.hpp"

namespace intensio {

using Json = nlohmann::ordered_json;

// Relational model:
//   { "signature": "sl", "worlds": [labels],
//     "relations": {rid: {world: [worlds]}},
//     "groups": {gvar: {world: [rids]}}, "props": {pvar: [worlds]} }
// Neighborhood model: the same without "relations", and
//   "groups": {gvar: {world: [[worlds], ...]}}.
// Sigma frame:
//   { "signature": "sl", "atoms": n, "group_elements": [names],
//     "ops": {token: [element names, arguments in mixed radix]},
//     "box": [[atom list per prop element] per group element], "dia": ... }
// A prop element is the bit mask of its atoms, so "box"[a][x] is box(a, x).
// Omitted world keys mean the empty image, extent or family.

enum class DocumentKind { Relational, Neighborhood, SigmaFrame };

/// Throws DocumentError on unreadable files or malformed JSON.
Json parse_json(std::string_view text);
Json read_json_file(const std::string& path);

/// Sigma frames have "atoms"; relational models have "relations".
DocumentKind document_kind(const Json& j);

/// Each reader throws DocumentError on schema errors and EvalError when the
/// model breaks its theory's constraints.
RelationalModel relational_from_json(const Json& j);
NeighborhoodModel neighborhood_from_json(const Json& j);
SigmaFrame sigma_frame_from_json(const Json& j);

Json to_json(const RelationalModel& m);
Json to_json(const NeighborhoodModel& m);
Json to_json(const SigmaFrame& sf);
/// Frame only, with empty groups and props.
Json to_json(const RelationalFrame& fr);

Json world_list(WorldSet s, const std::vector<std::string>& labels);
Json trace_json(const std::vector<TraceEntry>& trace, const std::vector<std::string>& labels);
/// { "model", "world", "formula", "trace" }; "model" is accepted by the
/// relational reader as it stands.
Json to_json(const CountermodelReport& r);

}  // namespace intensio

#endif  // INTENSIO_DOCUMENT_HPP
