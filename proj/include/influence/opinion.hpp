#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "influence/graph.hpp"
#include "influence/interior_system.hpp"

namespace influence {

/// Disjoint zealot sets Z_1..Z_k; opinion indices are 0-based.
class ZealotConfig {
 public:
  /// Throws InvalidInput if k < 2, the set count differs from k, or two sets
  /// overlap. An empty union is representable (a fresh game board) but every
  /// solve rejects it.
  explicit ZealotConfig(std::vector<VertexSet> sets);

  int k() const { return static_cast<int>(sets_.size()); }
  const VertexSet& operator[](int opinion) const { return sets_[static_cast<std::size_t>(opinion)]; }
  const std::vector<VertexSet>& sets() const { return sets_; }
  VertexSet all() const;
  /// Union of every set except `opinion`.
  VertexSet opposing(int opinion) const;
  bool empty() const;
  /// Opinion index owning v, or -1.
  int owner(Vertex v) const;
  void check_range(int n) const;
  ZealotConfig with(int opinion, Vertex v) const;

  friend bool operator==(const ZealotConfig&, const ZealotConfig&) = default;

 private:
  std::vector<VertexSet> sets_;
};

/// Row i holds the opinion u(i) on the simplex Delta_k.
struct OpinionField {
  Eigen::MatrixXd values;  // n x k

  int size() const { return static_cast<int>(values.rows()); }
  int k() const { return static_cast<int>(values.cols()); }
  /// Max deviation of a row sum from 1 and the most negative entry.
  double max_row_sum_error() const;
  double min_entry() const;
};

/// Grouped scalar field v = u_m: 1 on Z_m and T, 0 on opposing zealots.
using ScalarOpinion = Eigen::VectorXd;

/// Harmonic steady state with zealot Dirichlet data. Throws InvalidInput if
/// the graph is not strongly connected or there are no zealots.
OpinionField solve_harmonic(const Graph& g, const ZealotConfig& z, int dense_limit = kDefaultDenseLimit);

/// Grouped-opponent scalar solve for opinion m with extra converted set T.
/// Throws InvalidInput if T meets Z, m is out of range, the graph is not
/// strongly connected, or Z and T are both empty.
ScalarOpinion solve_grouped(const Graph& g, const ZealotConfig& z, int m, const VertexSet& extra = {},
                            int dense_limit = kDefaultDenseLimit);

/// Influence share (1/|V|) * ||u_m||_1.
double influence(const OpinionField& u, int m);
double influence(const ScalarOpinion& v);

/// Dirichlet energy 1/2 sum_l <u_l, L u_l> of an undirected graph.
double dirichlet_energy(const Graph& g, const OpinionField& u);
double dirichlet_energy(const Graph& g, const ScalarOpinion& v);

/// Explicit-Euler integration of du/dt = -Lu off the zealots. Requires
/// 0 < dt < 1 / max out-degree, rows of u0 on the simplex and zealot rows
/// equal to their extreme opinions.
OpinionField simulate_dynamics(const Graph& g, const ZealotConfig& z, const OpinionField& u0, double dt, long steps);

struct HittingEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  long walks = 0;
};

inline constexpr long kDefaultWalkStepCap = 1'000'000;

/// Monte-Carlo estimate of P_i{walk hits Z_m before the other zealots} with
/// kernel P(i -> j) = a_ij / d_i. Walks are split into fixed blocks with
/// independently seeded streams, so the result depends only on (seed, walks).
/// Throws NumericalError if a walk exceeds `step_cap` steps.
HittingEstimate mc_hitting_probability(const Graph& g, const ZealotConfig& z, int m, Vertex start, long walks,
                                       std::uint64_t seed, long step_cap = kDefaultWalkStepCap);

namespace detail {

/// Pinned mask and boundary values of the grouped problem for opinion m.
struct GroupedBoundary {
  std::vector<char> pinned;
  Eigen::VectorXd values;
};
GroupedBoundary grouped_boundary(int n, const ZealotConfig& z, int m, const VertexSet& extra);

/// solve_grouped without validation; the caller has checked its inputs.
ScalarOpinion solve_grouped_unchecked(const Graph& g, const ZealotConfig& z, int m, const VertexSet& extra,
                                      int dense_limit = kDefaultDenseLimit);

void require_strongly_connected(const Graph& g);

}  // namespace detail

}  // namespace influence
