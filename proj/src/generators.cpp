#include "influence/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace influence {

namespace {

struct FamilyName {
  Family family;
  const char* name;
};

constexpr FamilyName kFamilyNames[] = {
    {Family::kSquareGrid, "square_grid"},
    {Family::kSquareGridWithDefect, "square_grid_with_defect"},
    {Family::kHGraph, "h_graph"},
    {Family::kRandomGeometric, "random_geometric"},
    {Family::kTree, "tree"},
    {Family::kLadder, "ladder"},
    {Family::kHexLattice, "hex_lattice"},
    {Family::kTriLattice, "tri_lattice"},
    {Family::kCycle, "cycle"},
    {Family::kDirectedCycle, "directed_cycle"},
};

void require_positive(int value, const char* what) {
  if (value <= 0) throw InvalidInput(std::string(what) + " must be positive");
}

void require_in_grid(int w, int h, GridCoord c) {
  if (c.col < 1 || c.col > w || c.row < 1 || c.row > h)
    throw InvalidInput("grid coordinate (" + std::to_string(c.col) + "," + std::to_string(c.row) + ") outside grid");
}

void add_grid_edges(std::vector<Graph::Edge>& edges, int w, int h, Vertex offset) {
  for (int r = 1; r <= h; ++r)
    for (int c = 1; c <= w; ++c) {
      const Vertex v = offset + grid_vertex(w, {c, r});
      if (c < w) edges.push_back({v, v + 1});
      if (r < h) edges.push_back({v, v + w});
    }
}

// Portable uniform double in [0, 1) from the raw engine output.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<Point> geometric_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (auto& p : pts) {
    p[0] = unit_uniform(rng);
    p[1] = unit_uniform(rng);
  }
  return pts;
}

Graph checked_connected(Graph g, const char* family) {
  if (!is_strongly_connected(g)) throw InvalidInput(std::string(family) + " parameters produce a disconnected graph");
  return g;
}

}  // namespace

std::string to_string(Family f) {
  for (const auto& fn : kFamilyNames)
    if (fn.family == f) return fn.name;
  return "unknown";
}

Family family_from_string(const std::string& name) {
  for (const auto& fn : kFamilyNames)
    if (name == fn.name) return fn.family;
  throw InvalidInput("unknown graph family '" + name + "'");
}

GraphSpec GraphSpec::square_grid(int w, int h) {
  GraphSpec s;
  s.family = Family::kSquareGrid;
  s.width = w;
  s.height = h;
  return s;
}

GraphSpec GraphSpec::square_grid_with_defect(int w, int h, GridCoord a, GridCoord b) {
  GraphSpec s = square_grid(w, h);
  s.family = Family::kSquareGridWithDefect;
  s.defect_a = a;
  s.defect_b = b;
  return s;
}

GraphSpec GraphSpec::h_graph(int w, int h, GridCoord left, GridCoord right) {
  GraphSpec s = square_grid(w, h);
  s.family = Family::kHGraph;
  s.bridge_a = left;
  s.bridge_b = right;
  return s;
}

GraphSpec GraphSpec::random_geometric(int n, double radius, std::uint64_t seed) {
  GraphSpec s;
  s.family = Family::kRandomGeometric;
  s.n = n;
  s.radius = radius;
  s.seed = seed;
  return s;
}

GraphSpec GraphSpec::tree(int n, int branching) {
  GraphSpec s;
  s.family = Family::kTree;
  s.n = n;
  s.branching = branching;
  return s;
}

GraphSpec GraphSpec::ladder(int rungs) {
  GraphSpec s;
  s.family = Family::kLadder;
  s.n = rungs;
  return s;
}

GraphSpec GraphSpec::hex_lattice(int w, int h) {
  GraphSpec s = square_grid(w, h);
  s.family = Family::kHexLattice;
  return s;
}

GraphSpec GraphSpec::tri_lattice(int w, int h) {
  GraphSpec s = square_grid(w, h);
  s.family = Family::kTriLattice;
  return s;
}

GraphSpec GraphSpec::cycle(int n) {
  GraphSpec s;
  s.family = Family::kCycle;
  s.n = n;
  return s;
}

GraphSpec GraphSpec::directed_cycle(int n) {
  GraphSpec s = cycle(n);
  s.family = Family::kDirectedCycle;
  return s;
}

Graph random_digraph(int n, double arc_probability, std::uint64_t seed, bool weighted) {
  if (n < 2) throw InvalidInput("random digraph needs at least 2 vertices");
  if (!(arc_probability >= 0.0 && arc_probability <= 1.0)) throw InvalidInput("arc probability must be in [0, 1]");
  std::mt19937_64 rng(seed);
  auto weight = [&] { return weighted ? 0.5 + 1.5 * unit_uniform(rng) : 1.0; };
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
  for (std::size_t k = order.size() - 1; k > 0; --k) std::swap(order[k], order[rng() % (k + 1)]);
  std::vector<std::vector<bool>> used(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  std::vector<Graph::Edge> arcs;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Vertex a = order[k];
    const Vertex b = order[(k + 1) % order.size()];
    used[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
    arcs.push_back({a, b, weight()});
  }
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = 0; b < n; ++b) {
      if (a == b || used[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) continue;
      if (unit_uniform(rng) < arc_probability) arcs.push_back({a, b, weight()});
    }
  return Graph::from_edges(n, arcs, true);
}

Vertex grid_vertex(int width, GridCoord c) { return (c.row - 1) * width + (c.col - 1); }

GridCoord grid_coord(int width, Vertex v) { return GridCoord{v % width + 1, v / width + 1}; }

Vertex h_graph_right_vertex(int width, int height, GridCoord c) { return width * height + grid_vertex(width, c); }

Graph generate(const GraphSpec& spec) {
  std::vector<Graph::Edge> edges;
  const int w = spec.width;
  const int h = spec.height;
  switch (spec.family) {
    case Family::kSquareGrid:
      require_positive(w, "width");
      require_positive(h, "height");
      if (w * h < 2) throw InvalidInput("grid needs at least two vertices");
      add_grid_edges(edges, w, h, 0);
      return Graph::from_edges(w * h, edges, false);
    case Family::kSquareGridWithDefect: {
      require_positive(w, "width");
      require_positive(h, "height");
      require_in_grid(w, h, spec.defect_a);
      require_in_grid(w, h, spec.defect_b);
      add_grid_edges(edges, w, h, 0);
      const Vertex a = grid_vertex(w, spec.defect_a);
      const Vertex b = grid_vertex(w, spec.defect_b);
      const auto before = edges.size();
      std::erase_if(edges, [&](const Graph::Edge& e) {
        return (e.source == a && e.target == b) || (e.source == b && e.target == a);
      });
      if (edges.size() == before) throw InvalidInput("defect edge is not a grid edge");
      return checked_connected(Graph::from_edges(w * h, edges, false), "square_grid_with_defect");
    }
    case Family::kHGraph: {
      require_positive(w, "width");
      require_positive(h, "height");
      require_in_grid(w, h, spec.bridge_a);
      require_in_grid(w, h, spec.bridge_b);
      add_grid_edges(edges, w, h, 0);
      add_grid_edges(edges, w, h, w * h);
      edges.push_back({grid_vertex(w, spec.bridge_a), h_graph_right_vertex(w, h, spec.bridge_b)});
      return Graph::from_edges(2 * w * h, edges, false);
    }
    case Family::kRandomGeometric: {
      require_positive(spec.n, "n");
      if (!(spec.radius > 0.0)) throw InvalidInput("radius must be positive");
      const auto pts = geometric_points(spec.n, spec.seed);
      const double r2 = spec.radius * spec.radius;
      for (Vertex i = 0; i < spec.n; ++i)
        for (Vertex j = i + 1; j < spec.n; ++j) {
          const double dx = pts[static_cast<std::size_t>(i)][0] - pts[static_cast<std::size_t>(j)][0];
          const double dy = pts[static_cast<std::size_t>(i)][1] - pts[static_cast<std::size_t>(j)][1];
          if (dx * dx + dy * dy <= r2) edges.push_back({i, j});
        }
      std::vector<int> degree(static_cast<std::size_t>(spec.n), 0);
      for (const auto& e : edges) {
        ++degree[static_cast<std::size_t>(e.source)];
        ++degree[static_cast<std::size_t>(e.target)];
      }
      for (int d : degree)
        if (d == 0) throw InvalidInput("random_geometric parameters produce a disconnected graph");
      return checked_connected(Graph::from_edges(spec.n, edges, false), "random_geometric");
    }
    case Family::kTree:
      require_positive(spec.branching, "branching");
      if (spec.n < 2) throw InvalidInput("tree needs at least two vertices");
      for (Vertex v = 1; v < spec.n; ++v) edges.push_back({(v - 1) / spec.branching, v});
      return Graph::from_edges(spec.n, edges, false);
    case Family::kLadder:
      require_positive(spec.n, "rungs");
      for (Vertex i = 0; i < spec.n; ++i) {
        edges.push_back({i, spec.n + i});
        if (i + 1 < spec.n) {
          edges.push_back({i, i + 1});
          edges.push_back({spec.n + i, spec.n + i + 1});
        }
      }
      return Graph::from_edges(2 * spec.n, edges, false);
    case Family::kHexLattice:
      // Brick-wall embedding of the honeycomb: every horizontal edge, vertical
      // edges only where col + row is even.
      require_positive(w, "width");
      require_positive(h, "height");
      if (w < 2) throw InvalidInput("hex_lattice needs width >= 2");
      for (int r = 1; r <= h; ++r)
        for (int c = 1; c <= w; ++c) {
          const Vertex v = grid_vertex(w, {c, r});
          if (c < w) edges.push_back({v, v + 1});
          if (r < h && (c + r) % 2 == 0) edges.push_back({v, v + w});
        }
      return checked_connected(Graph::from_edges(w * h, edges, false), "hex_lattice");
    case Family::kTriLattice:
      require_positive(w, "width");
      require_positive(h, "height");
      if (w * h < 2) throw InvalidInput("tri_lattice needs at least two vertices");
      add_grid_edges(edges, w, h, 0);
      for (int r = 1; r < h; ++r)
        for (int c = 1; c < w; ++c) edges.push_back({grid_vertex(w, {c, r}), grid_vertex(w, {c + 1, r + 1})});
      return Graph::from_edges(w * h, edges, false);
    case Family::kCycle:
      if (spec.n < 3) throw InvalidInput("cycle needs n >= 3");
      for (Vertex i = 0; i < spec.n; ++i) edges.push_back({i, (i + 1) % spec.n});
      return Graph::from_edges(spec.n, edges, false);
    case Family::kDirectedCycle:
      if (spec.n < 2) throw InvalidInput("directed_cycle needs n >= 2");
      for (Vertex i = 0; i < spec.n; ++i) edges.push_back({i, (i + 1) % spec.n});
      return Graph::from_edges(spec.n, edges, true);
  }
  throw InvalidInput("unsupported family");
}

std::vector<Point> layout(const GraphSpec& spec) {
  const Graph g = generate(spec);
  const int n = g.size();
  std::vector<Point> pts(static_cast<std::size_t>(n));
  auto lattice = [&](int w, double x_shift_per_row, double row_scale) {
    for (Vertex v = 0; v < n; ++v) {
      const GridCoord c = grid_coord(w, v);
      pts[static_cast<std::size_t>(v)] = {c.col + x_shift_per_row * (c.row - 1), 1.0 + row_scale * (c.row - 1)};
    }
  };
  switch (spec.family) {
    case Family::kSquareGrid:
    case Family::kSquareGridWithDefect:
    case Family::kHexLattice:
      lattice(spec.width, 0.0, 1.0);
      break;
    case Family::kTriLattice:
      lattice(spec.width, -0.5, std::sqrt(3.0) / 2.0);
      break;
    case Family::kHGraph: {
      const int half = spec.width * spec.height;
      for (Vertex v = 0; v < n; ++v) {
        const GridCoord c = grid_coord(spec.width, v % half);
        const double shift = v < half ? 0.0 : static_cast<double>(spec.width);
        pts[static_cast<std::size_t>(v)] = {c.col + shift, static_cast<double>(c.row)};
      }
      break;
    }
    case Family::kRandomGeometric:
      pts = geometric_points(spec.n, spec.seed);
      break;
    case Family::kTree: {
      // Level-order placement: depth on y (root on top), index within level on x.
      int level_start = 0;
      int level_size = 1;
      int depth = 0;
      while (level_start < n) {
        for (int k = 0; k < level_size && level_start + k < n; ++k)
          pts[static_cast<std::size_t>(level_start + k)] = {(k + 0.5) / level_size, -static_cast<double>(depth)};
        level_start += level_size;
        level_size *= spec.branching;
        ++depth;
      }
      break;
    }
    case Family::kLadder:
      for (Vertex v = 0; v < n; ++v)
        pts[static_cast<std::size_t>(v)] = {static_cast<double>(v % spec.n), v < spec.n ? 0.0 : 1.0};
      break;
    case Family::kCycle:
    case Family::kDirectedCycle:
      for (Vertex v = 0; v < n; ++v) {
        const double angle = 2.0 * std::numbers::pi * v / n;
        pts[static_cast<std::size_t>(v)] = {std::cos(angle), std::sin(angle)};
      }
      break;
  }
  return pts;
}

std::vector<Vertex> grid_rotation(int side) {
  std::vector<Vertex> perm(static_cast<std::size_t>(side * side));
  for (Vertex v = 0; v < side * side; ++v) {
    const GridCoord c = grid_coord(side, v);
    perm[static_cast<std::size_t>(v)] = grid_vertex(side, {side + 1 - c.row, c.col});
  }
  return perm;
}

std::vector<Vertex> grid_mirror_x(int width, int height) {
  std::vector<Vertex> perm(static_cast<std::size_t>(width * height));
  for (Vertex v = 0; v < width * height; ++v) {
    const GridCoord c = grid_coord(width, v);
    perm[static_cast<std::size_t>(v)] = grid_vertex(width, {width + 1 - c.col, c.row});
  }
  return perm;
}

std::vector<Vertex> grid_mirror_y(int width, int height) {
  std::vector<Vertex> perm(static_cast<std::size_t>(width * height));
  for (Vertex v = 0; v < width * height; ++v) {
    const GridCoord c = grid_coord(width, v);
    perm[static_cast<std::size_t>(v)] = grid_vertex(width, {c.col, height + 1 - c.row});
  }
  return perm;
}

}  // namespace influence
