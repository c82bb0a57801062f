#pragma once

#include <string>
#include <string_view>

#include "influence/graph.hpp"

namespace influence {

/// Edge-list parse failure; `line()` is 1-based, 0 when the problem is global
/// (for example a vertex left without out-arcs).
class ParseError : public InvalidInput {
 public:
  ParseError(int line, const std::string& what)
      : InvalidInput(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Edge-list text format:
///
///     n <count> directed|undirected
///     <src> <dst> [weight]
///
/// Ids are 0-based, weight defaults to 1. Blank lines and `#` comments are
/// ignored. Undirected files list each edge once.
Graph read_graph(std::string_view text);

/// Canonical edge list; the weight column is omitted for unit weights.
std::string write_graph(const Graph& g);

Graph read_graph_file(const std::string& path);
void write_graph_file(const Graph& g, const std::string& path);

}  // namespace influence
