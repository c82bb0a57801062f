#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "influence/graph.hpp"
#include "influence/greedy.hpp"
#include "influence/opinion.hpp"

namespace influence {

inline constexpr double kDefaultEpsilon = 0.15;

/// Relaxed conversion potential: phi >= 0, zero on the zealots, unit mass.
struct RelaxPotential {
  Eigen::VectorXd phi;  // length n
  double epsilon = kDefaultEpsilon;

  /// Uniform mass over V \ Z.
  static RelaxPotential uniform(int n, const ZealotConfig& z, double epsilon);
  /// Throws InvalidInput on negative entries, mass on Z, a non-positive
  /// epsilon, or (when `unit_mass`) a total differing from 1 by more than 1e-9.
  void validate(const ZealotConfig& z, bool unit_mass = true) const;
};

/// Solution of the penalized problem
///
///     L v + eps^{-1} phi (v - 1) = 0   off Z,   v = 1 on Z_m,   v = 0 on Z \ Z_m,
///
/// with the adjoint w_c = eps^{-1} [L_cc + eps^{-1} diag(phi_c)]^{-T} e and
/// the interior gradient (1/|V|) (e - v_c) * w_c.
struct RelaxedState {
  std::vector<Vertex> free;  // interior vertices c = V \ Z
  Eigen::VectorXd v;         // full length n
  Eigen::VectorXd v_c;
  Eigen::VectorXd w_c;
  Eigen::VectorXd gradient_c;
  double objective = 0.0;

  /// Gradient scattered to a length-n vector (zero on Z).
  Eigen::VectorXd gradient_full(int n) const;
};

RelaxedState solve_relaxed(const Graph& g, const ZealotConfig& z, int m, const RelaxPotential& pot,
                           bool unit_mass = true);

/// Objective alone, for finite-difference checks.
double relaxed_objective(const Graph& g, const ZealotConfig& z, int m, const RelaxPotential& pot);

Eigen::VectorXd gradient(const RelaxedState& state);

/// Interior Hessian -(2 / (eps |V|)) sym(Phi * [w_c (x) (e - v_c)]) with
/// Phi = [L_cc + eps^{-1} diag(phi_c)]^{-1}.
Eigen::MatrixXd hessian(const RelaxedState& state, const Graph& g, const ZealotConfig& z, int m,
                        const RelaxPotential& pot);

/// Euclidean projection of y onto {x >= 0, sum x = mass}.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& y, double mass = 1.0);

struct MaximizeOptions {
  double tolerance = 1e-7;
  int max_iterations = 5000;
  double armijo_slope = 1e-4;
  double shrink = 0.5;
  /// Feasible starting potential; uniform over V \ Z when absent.
  std::optional<Eigen::VectorXd> start;
};

struct MaximizeResult {
  RelaxPotential potential;
  RelaxedState state;
  int iterations = 0;
  /// ||P(phi + grad) - phi||_inf at the returned point.
  double projected_gradient_norm = 0.0;
  double start_objective = 0.0;
};

/// Raised when projected-gradient ascent hits its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, MaximizeResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const MaximizeResult& partial() const { return partial_; }

 private:
  MaximizeResult partial_;
};

/// Projected-gradient ascent with Armijo backtracking on the restricted
/// simplex. Throws ConvergenceError past the iteration cap.
MaximizeResult maximize(const Graph& g, const ZealotConfig& z, int m, double epsilon, const MaximizeOptions& opts = {});

/// Picks `budget` vertices one at a time, each the argmax of a fresh relaxed
/// optimum with earlier picks frozen into Z_m. The value is the exact F_m(T).
TargetingSolution relaxed_select(const TargetingProblem& p, double epsilon, const MaximizeOptions& opts = {},
                                 TieBreak tie_break = TieBreak::kLowestId, std::uint64_t seed = 0);

/// max_i |phi_i - phi_{perm(i)}| without checking that perm is an automorphism.
double permutation_deviation(std::span<const Vertex> perm, const Eigen::VectorXd& phi);

/// As permutation_deviation, but throws InvalidInput unless perm is a graph
/// automorphism.
double symmetry_check(const Graph& g, std::span<const Vertex> perm, const Eigen::VectorXd& phi);

/// The alternative epsilon scale 1 / ||L||_F.
double frobenius_epsilon(const Graph& g);

}  // namespace influence
