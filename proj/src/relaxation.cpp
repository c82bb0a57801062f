#include "influence/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace influence {

namespace {

struct PenalizedSystem {
  InteriorSystem system;
  Eigen::VectorXd boundary;  // full-length Dirichlet values
};

PenalizedSystem build_system(const Graph& g, const ZealotConfig& z, int m, const RelaxPotential& pot) {
  const auto b = detail::grouped_boundary(g.size(), z, m, {});
  Eigen::VectorXd penalty = pot.phi / pot.epsilon;
  return PenalizedSystem{InteriorSystem(g, b.pinned, penalty), b.values};
}

void check_inputs(const Graph& g, const ZealotConfig& z, int m) {
  z.check_range(g.size());
  if (m < 0 || m >= z.k()) throw InvalidInput("opinion index out of range");
  detail::require_strongly_connected(g);
}

}  // namespace

RelaxPotential RelaxPotential::uniform(int n, const ZealotConfig& z, double epsilon) {
  const VertexSet zs = z.all();
  const auto free = static_cast<double>(n - static_cast<int>(zs.size()));
  if (free <= 0) throw InvalidInput("no free vertices for a potential");
  RelaxPotential pot{Eigen::VectorXd::Constant(n, 1.0 / free), epsilon};
  for (Vertex v : zs) pot.phi[v] = 0.0;
  return pot;
}

void RelaxPotential::validate(const ZealotConfig& z, bool unit_mass) const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be positive");
  if (phi.size() > 0 && phi.minCoeff() < 0.0) throw InvalidInput("potential has negative entries");
  for (Vertex v : z.all())
    if (v < phi.size() && phi[v] != 0.0) throw InvalidInput("potential is nonzero on zealot " + std::to_string(v));
  if (unit_mass && std::abs(phi.sum() - 1.0) > 1e-9) throw InvalidInput("potential mass must be 1");
}

Eigen::VectorXd RelaxedState::gradient_full(int n) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (std::size_t r = 0; r < free.size(); ++r) g[free[r]] = gradient_c[static_cast<Eigen::Index>(r)];
  return g;
}

RelaxedState solve_relaxed(const Graph& g, const ZealotConfig& z, int m, const RelaxPotential& pot, bool unit_mass) {
  check_inputs(g, z, m);
  if (pot.phi.size() != g.size()) throw InvalidInput("potential size mismatch");
  pot.validate(z, unit_mass);
  const int n = g.size();
  const auto ps = build_system(g, z, m, pot);
  const auto& sys = ps.system;
  const int c = sys.free_count();

  RelaxedState st;
  st.free = sys.free_vertices();
  Eigen::VectorXd phi_c(c);
  for (int r = 0; r < c; ++r) phi_c[r] = pot.phi[st.free[static_cast<std::size_t>(r)]];
  // v_c = [L_cc + eps^{-1} phi_c]^{-1} (eps^{-1} phi_c - L_cm e)
  st.v_c = sys.solve(sys.boundary_rhs(ps.boundary) + phi_c / pot.epsilon);
  st.w_c = sys.solve_transposed(Eigen::VectorXd::Ones(c)) / pot.epsilon;
  st.gradient_c = (Eigen::VectorXd::Ones(c) - st.v_c).cwiseProduct(st.w_c) / n;
  st.v = ps.boundary;
  for (int r = 0; r < c; ++r) st.v[st.free[static_cast<std::size_t>(r)]] = st.v_c[r];
  st.objective = st.v.sum() / n;
  return st;
}

double relaxed_objective(const Graph& g, const ZealotConfig& z, int m, const RelaxPotential& pot) {
  return solve_relaxed(g, z, m, pot, false).objective;
}

Eigen::VectorXd gradient(const RelaxedState& state) { return state.gradient_c; }

Eigen::MatrixXd hessian(const RelaxedState& state, const Graph& g, const ZealotConfig& z, int m,
                        const RelaxPotential& pot) {
  check_inputs(g, z, m);
  const auto ps = build_system(g, z, m, pot);
  const Eigen::MatrixXd inv = ps.system.inverse();
  const int c = ps.system.free_count();
  if (c != state.w_c.size()) throw InvalidInput("state does not match the potential");
  const Eigen::VectorXd slack = Eigen::VectorXd::Ones(c) - state.v_c;
  const Eigen::MatrixXd a = inv.cwiseProduct(state.w_c * slack.transpose());
  return -(2.0 / (pot.epsilon * g.size())) * 0.5 * (a + a.transpose());
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& y, double mass) {
  const Eigen::Index n = y.size();
  if (n == 0) return y;
  std::vector<double> sorted(y.data(), y.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const double t = (cumulative - mass) / static_cast<double>(k + 1);
    if (sorted[static_cast<std::size_t>(k)] - t > 0.0) theta = t;
  }
  return (y.array() - theta).max(0.0).matrix();
}

MaximizeResult maximize(const Graph& g, const ZealotConfig& z, int m, double epsilon, const MaximizeOptions& opts) {
  check_inputs(g, z, m);
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  const int n = g.size();
  RelaxPotential pot = RelaxPotential::uniform(n, z, epsilon);
  if (opts.start) {
    if (opts.start->size() != n) throw InvalidInput("start potential size mismatch");
    pot.phi = *opts.start;
    pot.validate(z);
  }
  RelaxedState state = solve_relaxed(g, z, m, pot);
  const std::vector<Vertex> free = state.free;
  const auto c = static_cast<Eigen::Index>(free.size());
  auto gather = [&](const Eigen::VectorXd& full) {
    Eigen::VectorXd x(c);
    for (Eigen::Index r = 0; r < c; ++r) x[r] = full[free[static_cast<std::size_t>(r)]];
    return x;
  };
  auto scatter = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (Eigen::Index r = 0; r < c; ++r) full[free[static_cast<std::size_t>(r)]] = x[r];
    return full;
  };
  auto pg_norm = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& grad) {
    return (project_simplex(x + grad) - x).lpNorm<Eigen::Infinity>();
  };

  MaximizeResult result;
  result.start_objective = state.objective;
  Eigen::VectorXd x = gather(pot.phi);
  Eigen::VectorXd grad = state.gradient_c;
  Eigen::VectorXd x_prev;
  Eigen::VectorXd grad_prev;
  double step = 1.0 / std::max(grad.lpNorm<Eigen::Infinity>(), 1e-300) / static_cast<double>(std::max<Eigen::Index>(c, 1));
  int it = 0;
  double pg = pg_norm(x, grad);
  while (pg > opts.tolerance && it < opts.max_iterations) {
    ++it;
    if (x_prev.size()) {
      // Barzilai-Borwein trial step for an ascent on a concave objective.
      const Eigen::VectorXd s = x - x_prev;
      const double curvature = -s.dot(grad - grad_prev);
      step = curvature > 0.0 ? std::clamp(s.squaredNorm() / curvature, 1e-12, 1e12) : 1e12;
    }
    bool accepted = false;
    for (int backtrack = 0; backtrack < 80; ++backtrack) {
      const Eigen::VectorXd trial = project_simplex(x + step * grad);
      RelaxPotential trial_pot{scatter(trial), epsilon};
      RelaxedState trial_state = solve_relaxed(g, z, m, trial_pot, false);
      if (trial_state.objective >= state.objective + opts.armijo_slope * grad.dot(trial - x)) {
        x_prev = x;
        grad_prev = grad;
        x = trial;
        state = std::move(trial_state);
        grad = state.gradient_c;
        accepted = true;
        break;
      }
      step *= opts.shrink;
    }
    pg = pg_norm(x, grad);
    if (!accepted) break;  // no ascent possible at machine precision
  }
  pot.phi = scatter(x);
  result.potential = pot;
  result.state = std::move(state);
  result.iterations = it;
  result.projected_gradient_norm = pg;
  if (pg > opts.tolerance)
    throw ConvergenceError("relaxed maximization stopped after " + std::to_string(it) +
                               " iterations with projected-gradient norm " + std::to_string(pg),
                           result);
  return result;
}

TargetingSolution relaxed_select(const TargetingProblem& p, double epsilon, const MaximizeOptions& opts,
                                 TieBreak tie_break, std::uint64_t seed) {
  if (!p.graph) throw InvalidInput("targeting problem has no graph");
  const Graph& g = *p.graph;
  p.zealots.check_range(g.size());
  if (p.m < 0 || p.m >= p.zealots.k()) throw InvalidInput("authority index out of range");
  const auto free = static_cast<int>(g.size() - p.zealots.all().size());
  if (p.budget < 0 || p.budget > free) throw InvalidInput("budget exceeds available vertices");
  std::mt19937_64 rng(seed);
  TargetingSolution sol;
  ZealotConfig current = p.zealots;
  double previous = p.zealots.empty() ? 0.0 : set_value(p, {});
  for (int round = 0; round < p.budget; ++round) {
    MaximizeOptions round_opts = opts;
    if (round > 0) round_opts.start.reset();
    const auto res = maximize(g, current, p.m, epsilon, round_opts);
    const auto& phi = res.potential.phi;
    double best = -std::numeric_limits<double>::infinity();
    for (Vertex v : res.state.free) best = std::max(best, phi[v]);
    std::vector<Vertex> tied;
    for (Vertex v : res.state.free)
      if (phi[v] >= best - kTieTolerance) tied.push_back(v);
    const Vertex pick = (tie_break == TieBreak::kLowestId || tied.size() == 1)
                            ? tied.front()
                            : tied[static_cast<std::size_t>(rng() % tied.size())];
    sol.chosen = sol.chosen.with(pick);
    current = current.with(p.m, pick);
    const double value = set_value(p, sol.chosen);
    sol.trace.push_back({pick, value - previous});
    previous = value;
  }
  sol.value = p.budget > 0 ? previous : set_value(p, {});
  return sol;
}

double permutation_deviation(std::span<const Vertex> perm, const Eigen::VectorXd& phi) {
  if (static_cast<Eigen::Index>(perm.size()) != phi.size()) throw InvalidInput("permutation size mismatch");
  double dev = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    dev = std::max(dev, std::abs(phi[static_cast<Eigen::Index>(i)] - phi[perm[i]]));
  return dev;
}

double symmetry_check(const Graph& g, std::span<const Vertex> perm, const Eigen::VectorXd& phi) {
  if (!is_automorphism(g, perm)) throw InvalidInput("permutation is not a graph automorphism");
  return permutation_deviation(perm, phi);
}

double frobenius_epsilon(const Graph& g) { return 1.0 / laplacian(g).norm(); }

}  // namespace influence
