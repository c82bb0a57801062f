#include <doctest.h>

#include <queue>
#include <random>

#include "influence/generators.hpp"
#include "influence/graph.hpp"
#include "influence/graph_io.hpp"
#include "support.hpp"

using namespace influence;

namespace {

// Reference reachability: every vertex reaches every other, by repeated BFS.
bool reference_strongly_connected(int n, const std::vector<std::vector<int>>& adj) {
  for (int s = 0; s < n; ++s) {
    std::vector<bool> seen(static_cast<std::size_t>(n));
    std::queue<int> q;
    q.push(s);
    seen[static_cast<std::size_t>(s)] = true;
    int count = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[static_cast<std::size_t>(u)])
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          ++count;
          q.push(v);
        }
    }
    if (count != n) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("laplacian of the 3-path") {
  Eigen::MatrixXd expected(3, 3);
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK(laplacian(testing::path(3)) == expected);
}

TEST_CASE("laplacian of a directed 3-cycle") {
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}}, true);
  const Eigen::MatrixXd l = laplacian(g);
  for (int i = 0; i < 3; ++i) {
    CHECK(l(i, i) == 1.0);
    CHECK(l.row(i).sum() == 0.0);
    CHECK(l((i), (i + 1) % 3) == -1.0);
  }
}

TEST_CASE("laplacian of an 11x11 grid interior row") {
  const Graph g = generate(GraphSpec::square_grid(11, 11));
  const Eigen::MatrixXd l = laplacian(g);
  const Vertex c = grid_vertex(11, {6, 6});
  CHECK(l(c, c) == 4.0);
  CHECK((l.row(c).array() == -1.0).count() == 4);
  CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("weighted laplacian rows sum to zero") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_digraph(12, 0.3, seed);
    const Eigen::MatrixXd l = laplacian(g);
    CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-14);
    for (Vertex i = 0; i < g.size(); ++i) CHECK(l(i, i) == doctest::Approx(g.out_degree(i)).epsilon(1e-15));
  }
}

TEST_CASE("graph construction rejects invalid input") {
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 0}, {0, 1}}, false), InvalidInput);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1}, {0, 1}}, true), InvalidInput);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1}, {1, 0}}, false), InvalidInput);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1, -1.0}}, false), InvalidInput);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1, std::nan("")}}, false), InvalidInput);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 2}}, false), InvalidInput);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}}, false), InvalidInput);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1}}, true), InvalidInput);
}

TEST_CASE("undirected graphs store symmetric arcs") {
  const Graph g = Graph::from_edges(3, {{0, 1, 2.0}, {1, 2, 0.5}}, false);
  CHECK(g.arc_weight(0, 1) == 2.0);
  CHECK(g.arc_weight(1, 0) == 2.0);
  CHECK(g.arc_weight(2, 1) == 0.5);
  CHECK_FALSE(g.has_arc(0, 2));
  CHECK(g.edge_count() == 2);
  CHECK(g.arc_count() == 4);
  CHECK(g.out_degree(1) == 2.5);
  const Eigen::MatrixXd a = -laplacian(g);
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("strong connectivity examples") {
  CHECK(is_strongly_connected(Graph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}}, true)));
  CHECK_FALSE(is_strongly_connected(Graph::from_edges(3, {{0, 1}, {1, 0}, {2, 0}}, true)));
  CHECK(is_strongly_connected(generate(GraphSpec::h_graph(5, 10, {5, 5}, {1, 5}))));
}

TEST_CASE("arcs 0->1 and 0->2 alone are not strongly connected") {
  // Vertices 1 and 2 need an out-arc to be valid; give them arcs to each other.
  const Graph g = Graph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}, {2, 1}}, true);
  CHECK_FALSE(is_strongly_connected(g));
}

TEST_CASE("strong connectivity agrees with a BFS reference on random digraphs") {
  std::mt19937_64 rng(42);
  int connected = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    std::vector<Graph::Edge> edges;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        if (i != j && rng() % 100 < 25) {
          edges.push_back({i, j});
          adj[static_cast<std::size_t>(i)].push_back(j);
        }
      if (adj[static_cast<std::size_t>(i)].empty()) {
        const int j = (i + 1) % n;
        edges.push_back({i, j});
        adj[static_cast<std::size_t>(i)].push_back(j);
      }
    }
    const Graph g = Graph::from_edges(n, edges, true);
    const bool expected = reference_strongly_connected(n, adj);
    CHECK(is_strongly_connected(g) == expected);
    connected += expected;
  }
  CHECK(connected > 10);
  CHECK(connected < 90);
}

TEST_CASE("generator edge counts") {
  const Graph grid = generate(GraphSpec::square_grid(11, 11));
  CHECK(grid.size() == 121);
  CHECK(grid.edge_count() == 220);
  const Graph h = generate(GraphSpec::h_graph(5, 10, {5, 5}, {1, 5}));
  CHECK(h.size() == 100);
  CHECK(h.edge_count() == 171);
  CHECK(h.has_arc(grid_vertex(5, {5, 5}), h_graph_right_vertex(5, 10, {1, 5})));
  const Graph d = generate(GraphSpec::square_grid_with_defect(11, 11, {6, 7}, {6, 8}));
  CHECK(d.edge_count() == 219);
  CHECK_FALSE(d.has_arc(grid_vertex(11, {6, 7}), grid_vertex(11, {6, 8})));
  CHECK(generate(GraphSpec::tree(15, 2)).edge_count() == 14);
  CHECK(generate(GraphSpec::ladder(6)).edge_count() == 6 + 2 * 5);
  CHECK(generate(GraphSpec::tri_lattice(4, 3)).edge_count() == 3 * 3 + 4 * 2 + 3 * 2);
  CHECK(generate(GraphSpec::cycle(7)).edge_count() == 7);
  const Graph dc = generate(GraphSpec::directed_cycle(5));
  CHECK(dc.directed());
  CHECK(dc.has_arc(0, 1));
  CHECK_FALSE(dc.has_arc(1, 0));
}

TEST_CASE("hex lattice has maximum degree three") {
  const Graph g = generate(GraphSpec::hex_lattice(6, 5));
  CHECK(g.max_out_degree() == 3.0);
  CHECK(is_strongly_connected(g));
}

TEST_CASE("generators are deterministic and reject bad parameters") {
  CHECK(generate(GraphSpec::random_geometric(50, 0.3, 7)) == generate(GraphSpec::random_geometric(50, 0.3, 7)));
  CHECK_FALSE(generate(GraphSpec::random_geometric(50, 0.3, 7)) == generate(GraphSpec::random_geometric(50, 0.3, 8)));
  CHECK_THROWS_AS(generate(GraphSpec::square_grid(0, 3)), InvalidInput);
  CHECK_THROWS_AS(generate(GraphSpec::random_geometric(50, 0.01, 1)), InvalidInput);
  CHECK_THROWS_AS(generate(GraphSpec::square_grid_with_defect(5, 5, {1, 1}, {3, 3})), InvalidInput);
  CHECK_THROWS_AS(family_from_string("moebius"), InvalidInput);
  for (const char* name : {"square_grid", "h_graph", "random_geometric", "directed_cycle", "tri_lattice"})
    CHECK(to_string(family_from_string(name)) == name);
}

TEST_CASE("random geometric layout matches the edge rule") {
  const GraphSpec spec = GraphSpec::random_geometric(40, 0.3, 3);
  const Graph g = generate(spec);
  const auto pts = layout(spec);
  for (Vertex i = 0; i < g.size(); ++i)
    for (Vertex j = i + 1; j < g.size(); ++j) {
      const double dx = pts[static_cast<std::size_t>(i)][0] - pts[static_cast<std::size_t>(j)][0];
      const double dy = pts[static_cast<std::size_t>(i)][1] - pts[static_cast<std::size_t>(j)][1];
      CHECK(g.has_arc(i, j) == (dx * dx + dy * dy <= 0.09));
    }
}

TEST_CASE("grid ids and layouts") {
  CHECK(grid_vertex(11, {1, 1}) == 0);
  CHECK(grid_vertex(11, {6, 6}) == 60);
  CHECK(grid_vertex(11, {6, 7}) == 71);
  CHECK(grid_coord(11, 49) == GridCoord{6, 5});
  const auto pts = layout(GraphSpec::square_grid(4, 3));
  CHECK(pts[5] == Point{2.0, 2.0});
  const auto h = layout(GraphSpec::h_graph(5, 10, {5, 5}, {1, 5}));
  CHECK(h[static_cast<std::size_t>(h_graph_right_vertex(5, 10, {1, 5}))] == Point{6.0, 5.0});
}

TEST_CASE("grid symmetries are automorphisms") {
  const Graph g = generate(GraphSpec::square_grid(7, 7));
  CHECK(is_automorphism(g, grid_rotation(7)));
  CHECK(is_automorphism(g, grid_mirror_x(7, 7)));
  CHECK(is_automorphism(g, grid_mirror_y(7, 7)));
  const Graph d = generate(GraphSpec::square_grid_with_defect(11, 11, {6, 7}, {6, 8}));
  CHECK(is_automorphism(d, grid_mirror_x(11, 11)));
  CHECK_FALSE(is_automorphism(d, grid_mirror_y(11, 11)));
  CHECK_FALSE(is_automorphism(d, grid_rotation(11)));
}

TEST_CASE("relabel composes with automorphism checks") {
  const Graph g = random_digraph(8, 0.3, 5);
  std::vector<Vertex> perm{3, 1, 7, 0, 6, 2, 5, 4};
  const Graph r = relabel(g, perm);
  for (const auto& e : g.edges()) CHECK(r.arc_weight(perm[e.source], perm[e.target]) == e.weight);
  std::vector<Vertex> id{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(is_automorphism(g, id));
}

TEST_CASE("hop distance") {
  const auto d = hop_distance(testing::path(5), VertexSet{0});
  CHECK(d == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("VertexSet keeps ids sorted and unique") {
  const VertexSet s(std::vector<Vertex>{5, 1, 3, 1});
  CHECK(s.vector() == std::vector<Vertex>{1, 3, 5});
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(2));
  CHECK(s.with(2).vector() == std::vector<Vertex>{1, 2, 3, 5});
  CHECK(s.intersects(VertexSet{5, 9}));
  CHECK_THROWS_AS(s.check_range(5), InvalidInput);
}

TEST_CASE("edge-list round trip") {
  const std::string text = "n 3 undirected\n0 1\n1 2\n";
  const Graph g = read_graph(text);
  CHECK(g == testing::path(3));
  CHECK(write_graph(g) == text);
  const Graph w = random_digraph(9, 0.4, 11);
  CHECK(read_graph(write_graph(w)) == w);
}

TEST_CASE("edge-list parse errors") {
  const auto line_of = [](const std::string& text) {
    try {
      read_graph(text);
    } catch (const ParseError& err) {
      return err.line();
    }
    return -1;
  };
  CHECK(line_of("n 3 undirected\n0 1\n1 1\n") == 3);
  CHECK(line_of("# comment\nn 2 directed\n0 x\n") == 3);
  CHECK(line_of("n 2 sideways\n") == 1);
  CHECK(line_of("0 1\n") == 1);
  CHECK(line_of("n 3 undirected\n") == 0);
  CHECK(line_of("n 3 undirected\n0 1 -2\n") == 2);
  CHECK(line_of("n 3 undirected\n0 5\n") == 2);
  CHECK(line_of("n 2 undirected\n\n# skip\n0 1 2.5\n") == -1);
}
