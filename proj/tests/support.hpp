#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "influence/graph.hpp"
#include "influence/opinion.hpp"

namespace testing {

using influence::Graph;
using influence::Vertex;
using influence::VertexSet;
using influence::ZealotConfig;

/// Undirected path 0 - 1 - ... - (n-1).
inline Graph path(int n) {
  std::vector<Graph::Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph::from_edges(n, e, false);
}

/// Star with center 0 and leaves 1..leaves.
inline Graph star(int leaves) {
  std::vector<Graph::Edge> e;
  for (int i = 1; i <= leaves; ++i) e.push_back({0, i});
  return Graph::from_edges(leaves + 1, e, false);
}

/// K4 on 0..3 with apex 4 joined to every K4 vertex.
inline Graph k4_apex() {
  std::vector<Graph::Edge> e;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) e.push_back({i, j});
  for (int i = 0; i < 4; ++i) e.push_back({i, 4});
  return Graph::from_edges(5, e, false);
}

/// Gauss-Seidel sweeps of v_i = sum_j a_ij v_j / d_i with v fixed on
/// `fixed`, run until the update stalls. Independent of the library solver.
inline Eigen::VectorXd gauss_seidel(const Graph& g, const std::vector<char>& fixed, Eigen::VectorXd v,
                                    int max_sweeps = 200000) {
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (Vertex i = 0; i < g.size(); ++i) {
      if (fixed[static_cast<std::size_t>(i)]) continue;
      double acc = 0.0;
      for (const auto& arc : g.out_arcs(i)) acc += arc.weight * v[arc.target];
      const double next = acc / g.out_degree(i);
      change = std::max(change, std::abs(next - v[i]));
      v[i] = next;
    }
    if (change < 1e-15) break;
  }
  return v;
}

/// Grouped field for opinion m with extra set T by Gauss-Seidel.
inline Eigen::VectorXd oracle_grouped(const Graph& g, const ZealotConfig& z, int m, const VertexSet& t = {}) {
  std::vector<char> fixed(static_cast<std::size_t>(g.size()), 0);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(g.size(), 0.5);
  for (int l = 0; l < z.k(); ++l)
    for (Vertex x : z[l]) {
      fixed[static_cast<std::size_t>(x)] = 1;
      v[x] = l == m ? 1.0 : 0.0;
    }
  for (Vertex x : t) {
    fixed[static_cast<std::size_t>(x)] = 1;
    v[x] = 1.0;
  }
  return gauss_seidel(g, fixed, v);
}

inline double oracle_value(const Graph& g, const ZealotConfig& z, int m, const VertexSet& t = {}) {
  return oracle_grouped(g, z, m, t).mean();
}

}  // namespace testing
