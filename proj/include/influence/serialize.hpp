#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "influence/game.hpp"
#include "influence/generators.hpp"
#include "influence/graph.hpp"
#include "influence/greedy.hpp"
#include "influence/heatmap.hpp"
#include "influence/opinion.hpp"

namespace influence {

using json = nlohmann::json;

/// {"n": 3, "directed": false, "edges": [[0, 1, 1.0], ...]} with canonical
/// edge order.
json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);

/// Family name plus the parameters that family uses; unused fields are omitted.
json spec_to_json(const GraphSpec& spec);
/// Missing keys take the GraphSpec defaults. Throws InvalidInput on unknown
/// families or malformed values.
GraphSpec spec_from_json(const json& j);

/// Header `vertex,u_1,...,u_k`, one row per vertex, values printed with 17
/// significant digits.
std::string field_to_csv(const OpinionField& u);
json field_to_json(const OpinionField& u);

json solution_to_json(const TargetingSolution& s);

/// Vertex list with layout coordinates, raw and normalized scores.
json heatmap_to_json(const Heatmap& h, const std::vector<Point>& coords);
/// Comment lines `# key=value` followed by `vertex,x,y,raw,normalized`.
std::string heatmap_to_csv(const Heatmap& h, const std::vector<Point>& coords, const std::string& spec_hash);

json game_to_json(const GameState& s, const std::string& graph_id);

/// Parses zealot groups such as "6:6;" or "60,61;r3:5": groups separated by
/// ';', members by ','. A member is a vertex id, a 1-based grid coordinate
/// col:row, or for h_graph l<col>:<row> / r<col>:<row> for the left and right
/// components (plain col:row means left). A trailing empty group is allowed.
std::vector<VertexSet> parse_zealot_groups(std::string_view text, const GraphSpec& spec);
/// Single vertex token in the same syntax.
Vertex parse_vertex(std::string_view token, const GraphSpec& spec);

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

/// Writes `text` to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace influence
