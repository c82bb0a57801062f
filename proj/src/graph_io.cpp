#include "influence/graph_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace influence {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

int parse_int(std::string_view tok, int line, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
  return value;
}

double parse_double(std::string_view tok, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "invalid weight '" + std::string(tok) + "'");
  return value;
}

}  // namespace

Graph read_graph(std::string_view text) {
  int line_no = 0;
  int n = -1;
  bool directed = false;
  std::vector<Graph::Edge> edges;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (n < 0) {
      if (tok.size() != 3 || tok[0] != "n") throw ParseError(line_no, "expected header 'n <count> directed|undirected'");
      n = parse_int(tok[1], line_no, "vertex count");
      if (n <= 0) throw ParseError(line_no, "vertex count must be positive");
      if (tok[2] == "directed") directed = true;
      else if (tok[2] == "undirected") directed = false;
      else throw ParseError(line_no, "expected 'directed' or 'undirected'");
      continue;
    }
    if (tok.size() != 2 && tok.size() != 3) throw ParseError(line_no, "expected 'src dst [weight]'");
    Graph::Edge e{parse_int(tok[0], line_no, "source"), parse_int(tok[1], line_no, "target"), 1.0};
    if (tok.size() == 3) e.weight = parse_double(tok[2], line_no);
    if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n)
      throw ParseError(line_no, "vertex id out of range");
    if (e.source == e.target) throw ParseError(line_no, "self-loop at vertex " + std::to_string(e.source));
    if (!(e.weight >= 0.0)) throw ParseError(line_no, "negative weight");
    edges.push_back(e);
  }
  if (n < 0) throw ParseError(0, "missing header");
  try {
    return Graph::from_edges(n, edges, directed);
  } catch (const InvalidInput& err) {
    throw ParseError(0, err.what());
  }
}

std::string write_graph(const Graph& g) {
  std::ostringstream out;
  out << "n " << g.size() << (g.directed() ? " directed" : " undirected") << '\n';
  char buf[64];
  for (const auto& e : g.edges()) {
    out << e.source << ' ' << e.target;
    if (e.weight != 1.0) {
      std::snprintf(buf, sizeof buf, "%.17g", e.weight);
      out << ' ' << buf;
    }
    out << '\n';
  }
  return out.str();
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_graph(buf.str());
}

void write_graph_file(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write graph file '" + path + "'");
  out << write_graph(g);
}

}  // namespace influence
