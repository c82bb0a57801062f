#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace influence {

using Vertex = int;

/// Raised when a graph, vertex set or zealot configuration violates its invariants.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Arc {
  Vertex target = 0;
  double weight = 1.0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Directed weighted graph. An arc i -> j means "i is influenced by j".
///
/// Undirected graphs are stored with both arc directions and identical
/// weights. Values are immutable after construction; every vertex has
/// positive out-degree.
class Graph {
 public:
  struct Edge {
    Vertex source;
    Vertex target;
    double weight = 1.0;
  };

  /// Builds from an edge list. For undirected graphs each edge is listed once
  /// and mirrored. Throws InvalidInput on self-loops, duplicate arcs, negative
  /// or non-finite weights, out-of-range ids or zero out-degree vertices.
  static Graph from_edges(int n, std::span<const Edge> edges, bool directed);
  static Graph from_edges(int n, std::initializer_list<Edge> edges, bool directed) {
    return from_edges(n, std::span<const Edge>(edges.begin(), edges.size()), directed);
  }

  int size() const { return static_cast<int>(out_.size()); }
  bool directed() const { return directed_; }
  std::span<const Arc> out_arcs(Vertex i) const { return out_[static_cast<std::size_t>(i)]; }
  double out_degree(Vertex i) const { return degree_[static_cast<std::size_t>(i)]; }
  double max_out_degree() const;
  std::size_t arc_count() const;
  /// Undirected edges for undirected graphs, arcs otherwise.
  std::size_t edge_count() const;
  /// Edge list in canonical order (source ascending, then target); undirected
  /// graphs list each edge once with source < target.
  std::vector<Edge> edges() const;
  bool has_arc(Vertex i, Vertex j) const;
  double arc_weight(Vertex i, Vertex j) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Graph() = default;

  bool directed_ = false;
  std::vector<std::vector<Arc>> out_;  // sorted by target
  std::vector<double> degree_;
};

/// Sorted, deduplicated list of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> ids) : VertexSet(std::vector<Vertex>(ids)) {}
  explicit VertexSet(std::vector<Vertex> ids);

  std::span<const Vertex> ids() const { return ids_; }
  const std::vector<Vertex>& vector() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool contains(Vertex v) const;
  bool intersects(const VertexSet& other) const;
  VertexSet with(Vertex v) const;
  VertexSet united(const VertexSet& other) const;
  /// Throws InvalidInput if any id lies outside [0, n).
  void check_range(int n) const;

  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> ids_;
};

/// Dense L = D - A with D the out-degree diagonal.
Eigen::MatrixXd laplacian(const Graph& g);

bool is_strongly_connected(const Graph& g);

/// Unweighted hop distance from the nearest source along arcs in either
/// direction; unreachable vertices get -1.
std::vector<int> hop_distance(const Graph& g, const VertexSet& sources);

/// Returns true if `perm` maps the weighted arc set onto itself.
bool is_automorphism(const Graph& g, std::span<const Vertex> perm);

/// Relabels vertices: vertex i of `g` becomes perm[i].
Graph relabel(const Graph& g, std::span<const Vertex> perm);

}  // namespace influence
