#include "influence/heatmap.hpp"

#include <algorithm>

#include "influence/greedy.hpp"

namespace influence {

double Heatmap::normalized_at(Vertex v) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) throw InvalidInput("vertex " + std::to_string(v) + " is not in the map");
  return normalized[static_cast<std::size_t>(it - vertices.begin())];
}

double Heatmap::raw_at(Vertex v) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) throw InvalidInput("vertex " + std::to_string(v) + " is not in the map");
  return raw[static_cast<std::size_t>(it - vertices.begin())];
}

Heatmap normalize_map(std::string kind, int authority, std::vector<Vertex> vertices, std::vector<double> raw) {
  Heatmap h;
  h.kind = std::move(kind);
  h.authority = authority;
  h.vertices = std::move(vertices);
  h.raw = std::move(raw);
  h.normalized.assign(h.raw.size(), 0.0);
  if (h.raw.empty()) {
    h.degenerate = true;
    return h;
  }
  const auto [lo_it, hi_it] = std::minmax_element(h.raw.begin(), h.raw.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  h.degenerate = !(hi - lo > 0.0);
  if (!h.degenerate)
    for (std::size_t k = 0; k < h.raw.size(); ++k) h.normalized[k] = (h.raw[k] - lo) / (hi - lo);
  for (std::size_t k = 0; k < h.raw.size(); ++k)
    if (h.raw[k] >= hi - kTieTolerance) h.argmax.push_back(h.vertices[k]);
  return h;
}

Heatmap energy_map(const Graph& g, const ZealotConfig& z, int m) {
  const TargetingProblem p(g, z, m, 0);
  const auto values = marginal_values(p, {}, true);
  std::vector<Vertex> vertices;
  std::vector<double> raw;
  for (const auto& [v, val] : values) {
    vertices.push_back(v);
    raw.push_back(val);
  }
  return normalize_map("energy", m, std::move(vertices), std::move(raw));
}

PhiMapResult phi_map(const Graph& g, const ZealotConfig& z, int m, double epsilon, const MaximizeOptions& opts) {
  PhiMapResult out{{}, maximize(g, z, m, epsilon, opts)};
  std::vector<Vertex> vertices = out.optimum.state.free;
  std::vector<double> raw;
  for (Vertex v : vertices) raw.push_back(out.optimum.potential.phi[v]);
  out.map = normalize_map("phi", m, std::move(vertices), std::move(raw));
  return out;
}

double localization_mass(const Graph& g, const VertexSet& anchors, const Eigen::VectorXd& phi, int radius) {
  const auto dist = hop_distance(g, anchors);
  double mass = 0.0;
  for (Vertex v = 0; v < g.size(); ++v)
    if (dist[static_cast<std::size_t>(v)] >= 0 && dist[static_cast<std::size_t>(v)] <= radius) mass += phi[v];
  return mass;
}

}  // namespace influence
