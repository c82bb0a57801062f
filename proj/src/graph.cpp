#include "influence/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace influence {

namespace {

std::string arc_name(Vertex i, Vertex j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

// Vertices reachable from `start` following arcs forward, or backward when
// `reverse` is set.
std::vector<char> reach(const Graph& g, Vertex start, bool reverse) {
  const int n = g.size();
  std::vector<std::vector<Vertex>> incoming;
  if (reverse) {
    incoming.resize(static_cast<std::size_t>(n));
    for (Vertex i = 0; i < n; ++i)
      for (const Arc& a : g.out_arcs(i)) incoming[static_cast<std::size_t>(a.target)].push_back(i);
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> stack{start};
  seen[static_cast<std::size_t>(start)] = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    auto visit = [&](Vertex u) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        stack.push_back(u);
      }
    };
    if (reverse) {
      for (Vertex u : incoming[static_cast<std::size_t>(v)]) visit(u);
    } else {
      for (const Arc& a : g.out_arcs(v)) visit(a.target);
    }
  }
  return seen;
}

}  // namespace

Graph Graph::from_edges(int n, std::span<const Edge> edges, bool directed) {
  if (n <= 0) throw InvalidInput("graph must have at least one vertex");
  Graph g;
  g.directed_ = directed;
  g.out_.resize(static_cast<std::size_t>(n));
  auto add_arc = [&](Vertex s, Vertex t, double w) {
    auto& list = g.out_[static_cast<std::size_t>(s)];
    list.push_back(Arc{t, w});
  };
  for (const Edge& e : edges) {
    if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n)
      throw InvalidInput("arc " + arc_name(e.source, e.target) + " out of range for n=" + std::to_string(n));
    if (e.source == e.target) throw InvalidInput("self-loop at vertex " + std::to_string(e.source));
    if (!std::isfinite(e.weight) || e.weight < 0.0)
      throw InvalidInput("arc " + arc_name(e.source, e.target) + " has invalid weight");
    add_arc(e.source, e.target, e.weight);
    if (!directed) add_arc(e.target, e.source, e.weight);
  }
  g.degree_.assign(static_cast<std::size_t>(n), 0.0);
  for (Vertex i = 0; i < n; ++i) {
    auto& list = g.out_[static_cast<std::size_t>(i)];
    std::sort(list.begin(), list.end(), [](const Arc& a, const Arc& b) { return a.target < b.target; });
    for (std::size_t k = 1; k < list.size(); ++k)
      if (list[k].target == list[k - 1].target)
        throw InvalidInput("duplicate arc " + arc_name(i, list[k].target));
    double d = 0.0;
    for (const Arc& a : list) d += a.weight;
    if (!(d > 0.0)) throw InvalidInput("vertex " + std::to_string(i) + " has zero out-degree");
    g.degree_[static_cast<std::size_t>(i)] = d;
  }
  return g;
}

double Graph::max_out_degree() const { return *std::max_element(degree_.begin(), degree_.end()); }

std::size_t Graph::arc_count() const {
  std::size_t m = 0;
  for (const auto& list : out_) m += list.size();
  return m;
}

std::size_t Graph::edge_count() const { return directed_ ? arc_count() : arc_count() / 2; }

std::vector<Graph::Edge> Graph::edges() const {
  std::vector<Edge> result;
  for (Vertex i = 0; i < size(); ++i)
    for (const Arc& a : out_arcs(i))
      if (directed_ || i < a.target) result.push_back(Edge{i, a.target, a.weight});
  return result;
}

bool Graph::has_arc(Vertex i, Vertex j) const {
  if (i < 0 || i >= size()) return false;
  const auto arcs = out_arcs(i);
  return std::binary_search(arcs.begin(), arcs.end(), Arc{j, 0.0},
                            [](const Arc& a, const Arc& b) { return a.target < b.target; });
}

double Graph::arc_weight(Vertex i, Vertex j) const {
  if (i < 0 || i >= size()) return 0.0;
  const auto arcs = out_arcs(i);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), j, [](const Arc& a, Vertex t) { return a.target < t; });
  return (it != arcs.end() && it->target == j) ? it->weight : 0.0;
}

VertexSet::VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool VertexSet::contains(Vertex v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }

bool VertexSet::intersects(const VertexSet& other) const {
  auto a = ids_.begin();
  auto b = other.ids_.begin();
  while (a != ids_.end() && b != other.ids_.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a; else ++b;
  }
  return false;
}

VertexSet VertexSet::with(Vertex v) const {
  std::vector<Vertex> ids = ids_;
  ids.push_back(v);
  return VertexSet(std::move(ids));
}

VertexSet VertexSet::united(const VertexSet& other) const {
  std::vector<Vertex> ids = ids_;
  ids.insert(ids.end(), other.ids_.begin(), other.ids_.end());
  return VertexSet(std::move(ids));
}

void VertexSet::check_range(int n) const {
  if (!ids_.empty() && (ids_.front() < 0 || ids_.back() >= n))
    throw InvalidInput("vertex id out of range for n=" + std::to_string(n));
}

Eigen::MatrixXd laplacian(const Graph& g) {
  const int n = g.size();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (Vertex i = 0; i < n; ++i) {
    lap(i, i) = g.out_degree(i);
    for (const Arc& a : g.out_arcs(i)) lap(i, a.target) -= a.weight;
  }
  return lap;
}

bool is_strongly_connected(const Graph& g) {
  const auto fwd = reach(g, 0, false);
  const auto bwd = reach(g, 0, true);
  return std::all_of(fwd.begin(), fwd.end(), [](char c) { return c != 0; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](char c) { return c != 0; });
}

std::vector<int> hop_distance(const Graph& g, const VertexSet& sources) {
  const int n = g.size();
  sources.check_range(n);
  std::vector<std::vector<Vertex>> nbrs(static_cast<std::size_t>(n));
  for (Vertex i = 0; i < n; ++i)
    for (const Arc& a : g.out_arcs(i)) {
      nbrs[static_cast<std::size_t>(i)].push_back(a.target);
      nbrs[static_cast<std::size_t>(a.target)].push_back(i);
    }
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::queue<Vertex> queue;
  for (Vertex s : sources) {
    dist[static_cast<std::size_t>(s)] = 0;
    queue.push(s);
  }
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop();
    for (Vertex u : nbrs[static_cast<std::size_t>(v)])
      if (dist[static_cast<std::size_t>(u)] < 0) {
        dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push(u);
      }
  }
  return dist;
}

bool is_automorphism(const Graph& g, std::span<const Vertex> perm) {
  const int n = g.size();
  if (static_cast<int>(perm.size()) != n) return false;
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (Vertex p : perm) {
    if (p < 0 || p >= n || hit[static_cast<std::size_t>(p)]) return false;
    hit[static_cast<std::size_t>(p)] = 1;
  }
  for (Vertex i = 0; i < n; ++i) {
    const Vertex pi = perm[static_cast<std::size_t>(i)];
    if (g.out_arcs(i).size() != g.out_arcs(pi).size()) return false;
    for (const Arc& a : g.out_arcs(i))
      if (g.arc_weight(pi, perm[static_cast<std::size_t>(a.target)]) != a.weight ||
          !g.has_arc(pi, perm[static_cast<std::size_t>(a.target)]))
        return false;
  }
  return true;
}

Graph relabel(const Graph& g, std::span<const Vertex> perm) {
  if (static_cast<int>(perm.size()) != g.size()) throw InvalidInput("permutation size mismatch");
  std::vector<Graph::Edge> edges = g.edges();
  for (auto& e : edges) {
    e.source = perm[static_cast<std::size_t>(e.source)];
    e.target = perm[static_cast<std::size_t>(e.target)];
  }
  return Graph::from_edges(g.size(), edges, g.directed());
}

}  // namespace influence
