#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "influence/graph.hpp"

namespace influence {

enum class Family {
  kSquareGrid,
  kSquareGridWithDefect,
  kHGraph,
  kRandomGeometric,
  kTree,
  kLadder,
  kHexLattice,
  kTriLattice,
  kCycle,
  kDirectedCycle,
};

std::string to_string(Family f);
/// Throws InvalidInput for unknown names.
Family family_from_string(const std::string& name);

/// Grid coordinates are 1-based (col, row) with row increasing upward.
struct GridCoord {
  int col = 1;
  int row = 1;
  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

/// Parameters for every generator family; fields irrelevant to a family are
/// ignored.
///
/// - square_grid / square_grid_with_defect / tri_lattice / hex_lattice: width x height
/// - square_grid_with_defect: removed edge `defect_a`-`defect_b`
/// - h_graph: two width x height grids joined by a bridge `bridge_a` (left) - `bridge_b` (right)
/// - random_geometric: n points uniform in the unit square, edges within `radius`
/// - tree: complete `branching`-ary tree on n vertices
/// - ladder: n rungs (2n vertices)
/// - cycle / directed_cycle: n vertices; directed arcs i -> i+1
struct GraphSpec {
  Family family = Family::kSquareGrid;
  int width = 11;
  int height = 11;
  int n = 0;
  double radius = 0.25;
  std::uint64_t seed = 1;
  int branching = 2;
  GridCoord defect_a{6, 7};
  GridCoord defect_b{6, 8};
  GridCoord bridge_a{5, 5};
  GridCoord bridge_b{1, 5};

  static GraphSpec square_grid(int w, int h);
  static GraphSpec square_grid_with_defect(int w, int h, GridCoord a, GridCoord b);
  static GraphSpec h_graph(int w, int h, GridCoord left, GridCoord right);
  static GraphSpec random_geometric(int n, double radius, std::uint64_t seed);
  static GraphSpec tree(int n, int branching);
  static GraphSpec ladder(int rungs);
  static GraphSpec hex_lattice(int w, int h);
  static GraphSpec tri_lattice(int w, int h);
  static GraphSpec cycle(int n);
  static GraphSpec directed_cycle(int n);
};

using Point = std::array<double, 2>;

/// Throws InvalidInput on nonpositive dimensions or a disconnected result.
Graph generate(const GraphSpec& spec);

/// Vertex positions for rendering: exact lattice coordinates for lattice
/// families, sampled positions for random geometric graphs.
std::vector<Point> layout(const GraphSpec& spec);

/// Strongly connected digraph: a directed Hamiltonian cycle over a seeded
/// random vertex order plus each remaining arc with probability
/// `arc_probability`. Weights are uniform in [0.5, 2) when `weighted`.
Graph random_digraph(int n, double arc_probability, std::uint64_t seed, bool weighted = true);

/// Row-major id of a 1-based grid coordinate in a width-wide grid.
Vertex grid_vertex(int width, GridCoord c);
GridCoord grid_coord(int width, Vertex v);

/// Id of a coordinate in the right-hand component of an h_graph.
Vertex h_graph_right_vertex(int width, int height, GridCoord c);

/// Permutations of a width x height grid: 90-degree rotation (square grids
/// only), mirror in x (col -> width+1-col), mirror in y.
std::vector<Vertex> grid_rotation(int side);
std::vector<Vertex> grid_mirror_x(int width, int height);
std::vector<Vertex> grid_mirror_y(int width, int height);

}  // namespace influence
