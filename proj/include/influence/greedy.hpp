#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "influence/graph.hpp"
#include "influence/opinion.hpp"

namespace influence {

/// Candidates whose values differ by at most this much are ties.
inline constexpr double kTieTolerance = 1e-12;

/// Authority m may convert `budget` non-zealot vertices. Construction throws
/// InvalidInput when m or the budget is out of range.
struct TargetingProblem {
  std::shared_ptr<const Graph> graph;
  ZealotConfig zealots;
  int m = 0;
  int budget = 0;

  TargetingProblem(std::shared_ptr<const Graph> g, ZealotConfig z, int authority, int t);
  TargetingProblem(const Graph& g, ZealotConfig z, int authority, int t);

  /// V \ Z in increasing order.
  std::vector<Vertex> candidates() const;
};

struct GreedyStep {
  Vertex vertex = 0;
  double gain = 0.0;
};

struct TargetingSolution {
  VertexSet chosen;
  double value = 0.0;
  std::vector<GreedyStep> trace;
};

enum class TieBreak { kLowestId, kSeededRandom };

struct GreedyOptions {
  TieBreak tie_break = TieBreak::kLowestId;
  std::uint64_t seed = 0;
  /// Evaluate all marginal gains of a round from one factorization instead of
  /// one fresh solve per candidate.
  bool factorized = true;
};

/// F_m(T): influence of m with Z_m augmented by T. Throws InvalidInput if T
/// meets Z or Z and T are both empty.
double set_value(const TargetingProblem& p, const VertexSet& t);

/// Greedy marginal-gain maximization over `budget` rounds. Requires a
/// nonempty zealot union so that F_m(empty) is defined.
TargetingSolution greedy(const TargetingProblem& p, const GreedyOptions& opts = {});

/// Marginal values F_m(T + i) for every candidate i not in T.
std::vector<std::pair<Vertex, double>> marginal_values(const TargetingProblem& p, const VertexSet& t,
                                                       bool factorized = true);

inline constexpr double kDefaultBruteForceCap = 2e6;

/// Exact maximizer by enumeration; ties go to the lexicographically smallest
/// set. Throws InvalidInput if C(|V \ Z|, budget) exceeds `cap`.
TargetingSolution brute_force(const TargetingProblem& p, double cap = kDefaultBruteForceCap);

double binomial(int n, int k);

struct SubmodularViolation {
  enum class Kind { kMonotone, kSubmodular } kind;
  VertexSet base;
  Vertex x = -1;
  Vertex y = -1;
  VertexSet superset;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string describe() const;
};

struct SubmodularReport {
  long monotone_checks = 0;
  long submodular_checks = 0;
  std::vector<SubmodularViolation> violations;
  bool ok() const { return violations.empty(); }
};

struct SubmodularCheckOptions {
  /// 0 = exhaustive over every (T, x, y) and every nested pair.
  long samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  /// Replaces F_m, used to self-test the harness.
  std::function<double(const VertexSet&)> value_override;
};

/// Checks monotonicity and diminishing returns of F_m. Violations are report
/// content, not exceptions. Exhaustive mode is limited to 20 free vertices.
SubmodularReport check_submodular(const Graph& g, const ZealotConfig& z, int m, const SubmodularCheckOptions& opts = {});

}  // namespace influence
