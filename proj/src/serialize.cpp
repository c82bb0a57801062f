#include "influence/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace influence {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json coord_json(GridCoord c) { return json::array({c.col, c.row}); }

GridCoord coord_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput("grid coordinate must be [col, row]");
  return {j[0].get<int>(), j[1].get<int>()};
}

bool is_grid_family(Family f) {
  return f == Family::kSquareGrid || f == Family::kSquareGridWithDefect || f == Family::kHGraph ||
         f == Family::kHexLattice || f == Family::kTriLattice;
}

int parse_int(std::string_view s, std::string_view whole) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InvalidInput("bad vertex token '" + std::string(whole) + "'");
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

json set_json(const VertexSet& s) { return json(s.vector()); }

}  // namespace

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const Graph::Edge& e : g.edges()) edges.push_back(json::array({e.source, e.target, e.weight}));
  return {{"n", g.size()}, {"directed", g.directed()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const bool directed = j.value("directed", false);
    std::vector<Graph::Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3) throw InvalidInput("edge must be [src, dst] or [src, dst, w]");
      edges.push_back({e[0].get<Vertex>(), e[1].get<Vertex>(), e.size() == 3 ? e[2].get<double>() : 1.0});
    }
    return Graph::from_edges(n, edges, directed);
  } catch (const json::exception& err) {
    throw InvalidInput(std::string("malformed graph JSON: ") + err.what());
  }
}

json spec_to_json(const GraphSpec& spec) {
  json j{{"family", to_string(spec.family)}};
  switch (spec.family) {
    case Family::kSquareGridWithDefect:
      j["defect"] = json::array({coord_json(spec.defect_a), coord_json(spec.defect_b)});
      [[fallthrough]];
    case Family::kSquareGrid:
    case Family::kHexLattice:
    case Family::kTriLattice:
      j["width"] = spec.width;
      j["height"] = spec.height;
      break;
    case Family::kHGraph:
      j["width"] = spec.width;
      j["height"] = spec.height;
      j["bridge"] = json::array({coord_json(spec.bridge_a), coord_json(spec.bridge_b)});
      break;
    case Family::kRandomGeometric:
      j["n"] = spec.n;
      j["radius"] = spec.radius;
      j["seed"] = spec.seed;
      break;
    case Family::kTree:
      j["n"] = spec.n;
      j["branching"] = spec.branching;
      break;
    case Family::kLadder:
    case Family::kCycle:
    case Family::kDirectedCycle:
      j["n"] = spec.n;
      break;
  }
  return j;
}

GraphSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("graph spec must be a JSON object");
  try {
    GraphSpec s;
    s.family = family_from_string(j.at("family").get<std::string>());
    s.width = j.value("width", s.width);
    s.height = j.value("height", s.height);
    s.n = j.value("n", s.n);
    s.radius = j.value("radius", s.radius);
    s.seed = j.value("seed", s.seed);
    s.branching = j.value("branching", s.branching);
    if (j.contains("defect")) {
      const auto& d = j.at("defect");
      if (!d.is_array() || d.size() != 2) throw InvalidInput("defect must be [[col,row],[col,row]]");
      s.defect_a = coord_from_json(d[0]);
      s.defect_b = coord_from_json(d[1]);
    }
    if (j.contains("bridge")) {
      const auto& b = j.at("bridge");
      if (!b.is_array() || b.size() != 2) throw InvalidInput("bridge must be [[col,row],[col,row]]");
      s.bridge_a = coord_from_json(b[0]);
      s.bridge_b = coord_from_json(b[1]);
    }
    return s;
  } catch (const json::exception& err) {
    throw InvalidInput(std::string("malformed graph spec: ") + err.what());
  }
}

std::string field_to_csv(const OpinionField& u) {
  std::ostringstream out;
  out << "vertex";
  for (int l = 0; l < u.k(); ++l) out << ",u_" << l + 1;
  out << '\n';
  for (int i = 0; i < u.size(); ++i) {
    out << i;
    for (int l = 0; l < u.k(); ++l) out << ',' << num(u.values(i, l));
    out << '\n';
  }
  return out.str();
}

json field_to_json(const OpinionField& u) {
  json rows = json::array();
  for (int i = 0; i < u.size(); ++i) {
    json row = json::array();
    for (int l = 0; l < u.k(); ++l) row.push_back(u.values(i, l));
    rows.push_back(std::move(row));
  }
  return {{"n", u.size()}, {"k", u.k()}, {"u", std::move(rows)}};
}

json solution_to_json(const TargetingSolution& s) {
  json trace = json::array();
  for (const GreedyStep& step : s.trace) trace.push_back({{"vertex", step.vertex}, {"gain", step.gain}});
  return {{"chosen", set_json(s.chosen)}, {"value", s.value}, {"trace", std::move(trace)}};
}

json heatmap_to_json(const Heatmap& h, const std::vector<Point>& coords) {
  json vertices = json::array();
  for (std::size_t k = 0; k < h.vertices.size(); ++k) {
    const Vertex v = h.vertices[k];
    json entry{{"id", v}, {"raw", h.raw[k]}, {"normalized", h.normalized[k]}};
    if (static_cast<std::size_t>(v) < coords.size()) {
      entry["x"] = coords[static_cast<std::size_t>(v)][0];
      entry["y"] = coords[static_cast<std::size_t>(v)][1];
    }
    vertices.push_back(std::move(entry));
  }
  return {{"kind", h.kind},
          {"authority", h.authority + 1},
          {"degenerate", h.degenerate},
          {"argmax", h.argmax},
          {"vertices", std::move(vertices)}};
}

std::string heatmap_to_csv(const Heatmap& h, const std::vector<Point>& coords, const std::string& spec_hash) {
  std::ostringstream out;
  out << "# spec_hash=" << spec_hash << '\n';
  out << "# kind=" << h.kind << '\n';
  out << "# authority=" << h.authority + 1 << '\n';
  out << "# degenerate=" << (h.degenerate ? 1 : 0) << '\n';
  out << "# argmax=";
  for (std::size_t k = 0; k < h.argmax.size(); ++k) out << (k ? " " : "") << h.argmax[k];
  out << '\n';
  out << "vertex,x,y,raw,normalized\n";
  for (std::size_t k = 0; k < h.vertices.size(); ++k) {
    const auto v = static_cast<std::size_t>(h.vertices[k]);
    out << v << ',';
    if (v < coords.size())
      out << num(coords[v][0]) << ',' << num(coords[v][1]);
    else
      out << ',';
    out << ',' << num(h.raw[k]) << ',' << num(h.normalized[k]) << '\n';
  }
  return out.str();
}

json game_to_json(const GameState& s, const std::string& graph_id) {
  json history = json::array();
  for (const Move& m : s.history) history.push_back({{"player", m.player + 1}, {"vertex", m.vertex}});
  json field = nullptr;
  if (s.field.size() > 0) field = std::vector<double>(s.field.data(), s.field.data() + s.field.size());
  return {{"graph_id", graph_id},
          {"n", s.graph->size()},
          {"zealots", json::array({set_json(s.zealots[0]), set_json(s.zealots[1])})},
          {"initial", json::array({set_json(s.initial[0]), set_json(s.initial[1])})},
          {"first_turn", s.first_turn + 1},
          {"turn", s.turn + 1},
          {"rounds", s.config.rounds},
          {"over", s.over()},
          {"history", std::move(history)},
          {"shares", s.shares ? json::array({(*s.shares)[0], (*s.shares)[1]}) : json(nullptr)},
          {"field", std::move(field)},
          {"legal_moves", set_json(legal_moves(s))}};
}

Vertex parse_vertex(std::string_view token, const GraphSpec& spec) {
  const std::string_view whole = token;
  token = trim(token);
  bool right = false;
  if (!token.empty() && (token.front() == 'l' || token.front() == 'r')) {
    if (spec.family != Family::kHGraph)
      throw InvalidInput("component prefix in '" + std::string(whole) + "' only applies to h_graph");
    right = token.front() == 'r';
    token.remove_prefix(1);
  }
  const auto colon = token.find(':');
  if (colon == std::string_view::npos) {
    if (right) throw InvalidInput("component prefix needs a col:row coordinate in '" + std::string(whole) + "'");
    return parse_int(token, whole);
  }
  if (!is_grid_family(spec.family))
    throw InvalidInput("grid coordinate '" + std::string(whole) + "' used with a non-grid family");
  const GridCoord c{parse_int(token.substr(0, colon), whole), parse_int(token.substr(colon + 1), whole)};
  if (c.col < 1 || c.col > spec.width || c.row < 1 || c.row > spec.height)
    throw InvalidInput("grid coordinate '" + std::string(whole) + "' is outside the grid");
  return right ? h_graph_right_vertex(spec.width, spec.height, c) : grid_vertex(spec.width, c);
}

std::vector<VertexSet> parse_zealot_groups(std::string_view text, const GraphSpec& spec) {
  std::vector<VertexSet> groups;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(';', start), text.size());
    const std::string_view group = text.substr(start, end - start);
    std::vector<Vertex> ids;
    std::size_t pos = 0;
    while (pos <= group.size()) {
      const auto comma = std::min(group.find(',', pos), group.size());
      const std::string_view token = trim(group.substr(pos, comma - pos));
      if (!token.empty()) ids.push_back(parse_vertex(token, spec));
      pos = comma + 1;
    }
    const auto unique = VertexSet(ids);
    if (unique.size() != ids.size()) throw InvalidInput("zealot group lists a vertex twice");
    groups.push_back(unique);
    if (end == text.size()) break;
    start = end + 1;
  }
  while (groups.size() < 2) groups.emplace_back();
  return groups;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace influence
