#pragma once

#include <string>
#include <vector>

#include "influence/graph.hpp"
#include "influence/opinion.hpp"
#include "influence/relaxation.hpp"

namespace influence {

/// Per-candidate score map normalized to [0, 1] by (x - min) / (max - min).
/// When every candidate scores the same the normalized map is all zeros and
/// `degenerate` is set.
struct Heatmap {
  std::string kind;  // "energy" or "phi"
  int authority = 0;
  std::vector<Vertex> vertices;
  std::vector<double> raw;
  std::vector<double> normalized;
  bool degenerate = false;
  /// Vertices whose raw score is within kTieTolerance of the maximum.
  std::vector<Vertex> argmax;

  double normalized_at(Vertex v) const;
  double raw_at(Vertex v) const;
};

Heatmap normalize_map(std::string kind, int authority, std::vector<Vertex> vertices, std::vector<double> raw);

/// F_m({i}) for every non-zealot i.
Heatmap energy_map(const Graph& g, const ZealotConfig& z, int m);

struct PhiMapResult {
  Heatmap map;
  MaximizeResult optimum;
};

/// Normalized relaxed optimum phi over V \ Z.
PhiMapResult phi_map(const Graph& g, const ZealotConfig& z, int m, double epsilon, const MaximizeOptions& opts = {});

/// Sum of phi over vertices within `radius` hops of `anchors`.
double localization_mass(const Graph& g, const VertexSet& anchors, const Eigen::VectorXd& phi, int radius = 2);

}  // namespace influence
