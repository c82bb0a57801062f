#include "influence/properties.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "influence/game.hpp"
#include "influence/generators.hpp"
#include "influence/greedy.hpp"
#include "influence/opinion.hpp"
#include "influence/relaxation.hpp"

namespace influence {

namespace {

struct Instance {
  Graph graph;
  ZealotConfig zealots;
};

// Disjoint zealot sets of sizes `sizes` drawn from a seeded shuffle.
ZealotConfig random_zealots(int n, const std::vector<int>& sizes, std::mt19937_64& rng) {
  std::vector<Vertex> pool(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) pool[static_cast<std::size_t>(v)] = v;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<VertexSet> sets;
  std::size_t next = 0;
  for (int s : sizes) {
    std::vector<Vertex> ids(pool.begin() + static_cast<long>(next), pool.begin() + static_cast<long>(next + static_cast<std::size_t>(s)));
    next += static_cast<std::size_t>(s);
    sets.emplace_back(std::move(ids));
  }
  return ZealotConfig(std::move(sets));
}

std::vector<Instance> instances(std::uint64_t seed, int count, int n, std::vector<int> sizes) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  for (int k = 0; k < count; ++k) {
    Graph g = (k % 2 == 0) ? random_digraph(n, 0.3, rng()) : generate(GraphSpec::cycle(n));
    if (k % 4 == 3) g = generate(GraphSpec::square_grid(3, (n + 2) / 3));
    ZealotConfig z = random_zealots(g.size(), sizes, rng);
    out.push_back({std::move(g), std::move(z)});
  }
  return out;
}

Eigen::VectorXd random_potential(const Graph& g, const ZealotConfig& z, std::mt19937_64& rng) {
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(g.size());
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (Vertex v = 0; v < g.size(); ++v)
    if (z.owner(v) < 0) phi[v] = u(rng);
  return phi / phi.sum();
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

PropertyResult check(std::string name, bool ok, std::string detail) { return {std::move(name), ok, std::move(detail)}; }

PropertyResult simplex_invariance(std::uint64_t seed) {
  double row = 0.0, lo = 0.0, hi = 1.0;
  for (const auto& in : instances(seed, 8, 9, {1, 2, 1})) {
    const OpinionField u = solve_harmonic(in.graph, in.zealots);
    row = std::max(row, u.max_row_sum_error());
    lo = std::min(lo, u.min_entry());
    hi = std::max(hi, u.values.maxCoeff());
  }
  return check("simplex_invariance", row <= 1e-9 && lo >= -1e-12 && hi <= 1.0 + 1e-12,
               "row-sum error " + fmt(row) + ", entries in [" + fmt(lo) + ", " + fmt(hi) + "]");
}

PropertyResult reduction_consistency(std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& in : instances(seed + 1, 8, 9, {1, 1, 2})) {
    const OpinionField u = solve_harmonic(in.graph, in.zealots);
    for (int m = 0; m < in.zealots.k(); ++m)
      worst = std::max(worst, (solve_grouped(in.graph, in.zealots, m) - u.values.col(m)).lpNorm<Eigen::Infinity>());
  }
  return check("reduction_consistency", worst <= 1e-9, "max deviation " + fmt(worst));
}

PropertyResult hitting_probability(std::uint64_t seed) {
  int total = 0, inside = 0;
  for (const auto& in : instances(seed + 2, 3, 7, {1, 1})) {
    const auto v = solve_grouped(in.graph, in.zealots, 0);
    for (Vertex i = 0; i < in.graph.size(); ++i) {
      if (in.zealots.owner(i) >= 0) continue;
      const auto est = mc_hitting_probability(in.graph, in.zealots, 0, i, 4000, seed + static_cast<std::uint64_t>(i));
      ++total;
      inside += std::abs(est.probability - v[i]) <= 4.0 * std::max(est.std_error, 1e-3);
    }
  }
  return check("hitting_probability", inside == total,
               std::to_string(inside) + "/" + std::to_string(total) + " estimates within 4 standard errors");
}

PropertyResult endpoint_values(std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& in : instances(seed + 3, 6, 8, {2, 1})) {
    const TargetingProblem p(in.graph, in.zealots, 0, 0);
    const VertexSet rest(p.candidates());
    const int n = in.graph.size();
    const double full = (static_cast<double>(rest.size()) + static_cast<double>(in.zealots[0].size())) / n;
    worst = std::max(worst, std::abs(set_value(p, rest) - full));
    const double empty = solve_harmonic(in.graph, in.zealots).values.col(0).sum() / n;
    worst = std::max(worst, std::abs(set_value(p, {}) - empty));
  }
  return check("endpoint_values", worst <= 1e-9, "max deviation " + fmt(worst));
}

PropertyResult monotone_submodular(std::uint64_t seed) {
  long checks = 0;
  std::size_t violations = 0;
  for (const auto& in : instances(seed + 4, 4, 8, {1, 1})) {
    const auto report = check_submodular(in.graph, in.zealots, 0);
    checks += report.monotone_checks + report.submodular_checks;
    violations += report.violations.size();
  }
  return check("monotone_submodular", violations == 0,
               std::to_string(violations) + " violations in " + std::to_string(checks) + " checks");
}

PropertyResult greedy_bound(std::uint64_t seed) {
  int optimal = 0, total = 0;
  double worst = 1.0;
  const double bound = 1.0 - 1.0 / std::numbers::e;
  for (const auto& in : instances(seed + 5, 6, 9, {1, 1})) {
    for (int t = 1; t <= 2; ++t) {
      const TargetingProblem p(in.graph, in.zealots, 0, t);
      const double g = greedy(p).value;
      const double opt = brute_force(p).value;
      worst = std::min(worst, g / opt);
      optimal += g >= opt - 1e-12;
      ++total;
    }
  }
  return check("greedy_bound", worst >= bound - 1e-9,
               "worst greedy/OPT " + fmt(worst) + ", optimal in " + std::to_string(optimal) + "/" + std::to_string(total));
}

PropertyResult gradient_fd(std::uint64_t seed, Mutation mutation) {
  std::mt19937_64 rng(seed + 6);
  double worst = 0.0;
  for (const auto& in : instances(seed + 6, 4, 8, {1, 1})) {
    const RelaxPotential pot{random_potential(in.graph, in.zealots, rng), 0.2};
    const RelaxedState st = solve_relaxed(in.graph, in.zealots, 0, pot);
    Eigen::VectorXd grad = gradient(st);
    if (mutation == Mutation::kGradient) grad *= 1.01;
    Eigen::VectorXd fd(grad.size());
    const double h = 1e-5;
    for (std::size_t r = 0; r < st.free.size(); ++r) {
      RelaxPotential plus = pot, minus = pot;
      plus.phi[st.free[r]] += h;
      minus.phi[st.free[r]] -= h;
      fd[static_cast<Eigen::Index>(r)] = (relaxed_objective(in.graph, in.zealots, 0, plus) -
                                          relaxed_objective(in.graph, in.zealots, 0, minus)) / (2 * h);
    }
    worst = std::max(worst, (grad - fd).lpNorm<Eigen::Infinity>() / fd.lpNorm<Eigen::Infinity>());
  }
  return check("gradient_fd", worst <= 1e-5, "max relative error " + fmt(worst));
}

PropertyResult hessian_concavity(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 7);
  double asym = 0.0, eig = -1.0, fd_err = 0.0;
  for (const auto& in : instances(seed + 7, 4, 8, {1, 1})) {
    const RelaxPotential pot{random_potential(in.graph, in.zealots, rng), 0.2};
    const RelaxedState st = solve_relaxed(in.graph, in.zealots, 0, pot);
    const Eigen::MatrixXd hess = hessian(st, in.graph, in.zealots, 0, pot);
    asym = std::max(asym, (hess - hess.transpose()).cwiseAbs().maxCoeff());
    eig = std::max(eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hess).eigenvalues().maxCoeff());
    Eigen::MatrixXd fd(hess.rows(), hess.cols());
    const double h = 1e-5;
    for (std::size_t r = 0; r < st.free.size(); ++r) {
      RelaxPotential plus = pot, minus = pot;
      plus.phi[st.free[r]] += h;
      minus.phi[st.free[r]] -= h;
      fd.col(static_cast<Eigen::Index>(r)) = (solve_relaxed(in.graph, in.zealots, 0, plus, false).gradient_c -
                                              solve_relaxed(in.graph, in.zealots, 0, minus, false).gradient_c) / (2 * h);
    }
    fd_err = std::max(fd_err, (hess - fd).cwiseAbs().maxCoeff() / hess.cwiseAbs().maxCoeff());
  }
  return check("hessian_concavity", asym <= 1e-12 && eig <= 1e-8 && fd_err <= 1e-4,
               "asymmetry " + fmt(asym) + ", max eigenvalue " + fmt(eig) + ", relative FD error " + fmt(fd_err));
}

PropertyResult relaxed_symmetry(std::uint64_t seed) {
  const Graph g = generate(GraphSpec::square_grid(5, 5));
  const ZealotConfig z({VertexSet{12}, VertexSet{0, 4, 20, 24}});
  const auto base = maximize(g, z, 0, kDefaultEpsilon);
  std::mt19937_64 rng(seed + 8);
  MaximizeOptions opts;
  opts.start = random_potential(g, z, rng);
  const auto other = maximize(g, z, 0, kDefaultEpsilon, opts);
  const double spread = (base.potential.phi - other.potential.phi).lpNorm<Eigen::Infinity>();
  const double dev = symmetry_check(g, grid_rotation(5), base.potential.phi);
  return check("relaxed_symmetry", spread <= 1e-5 && dev <= 1e-4,
               "start spread " + fmt(spread) + ", rotation deviation " + fmt(dev));
}

PropertyResult epsilon_convergence(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 9);
  const Graph g = random_digraph(10, 0.3, rng());
  const ZealotConfig z({VertexSet{0}, VertexSet{1}});
  const VertexSet t{4, 7};
  const auto exact = solve_grouped(g, z, 0, t);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(g.size());
  for (Vertex v : t) phi[v] = 0.5;
  double previous = INFINITY;
  bool decreasing = true;
  double gap = 0.0;
  for (double eps = 1e-1; eps >= 1e-6 * 0.999; eps /= 10) {
    gap = (solve_relaxed(g, z, 0, {phi, eps}).v - exact).lpNorm<Eigen::Infinity>();
    decreasing = decreasing && gap < previous;
    previous = gap;
  }
  return check("epsilon_convergence", decreasing && gap <= 1e-4, "final gap " + fmt(gap));
}

PropertyResult game_invariants(std::uint64_t seed) {
  const int n = 5;
  const auto cyc = std::make_shared<const Graph>(generate(GraphSpec::directed_cycle(n)));
  GameState s = new_game(cyc, {1});
  s = apply_move(s, 0, 2);
  s = apply_move(s, 1, 1);  // the arc 1 -> 2 points at player 1's vertex
  const double second = (*s.shares)[1];
  const bool cycle_ok = std::abs(second - (n - 1.0) / n) <= 1e-12;

  const auto geo = std::make_shared<const Graph>(generate(GraphSpec::tri_lattice(5, 6)));
  GameState game = new_game(geo, {3});
  double sum_err = 0.0;
  for (int turn = 0; !game.over(); ++turn) {
    const Player p = turn % 2 == 0 ? Player::greedy() : Player::random(seed);
    game = apply_move(game, game.turn, ai_move(game, p));
    if (game.shares) sum_err = std::max(sum_err, std::abs((*game.shares)[0] + (*game.shares)[1] - 1.0));
  }
  const GameState again = replay(game);
  const bool replay_ok = again.shares == game.shares && again.zealots == game.zealots;
  return check("game_invariants", cycle_ok && replay_ok && sum_err <= 1e-9,
               "cycle share " + fmt(second) + ", share-sum error " + fmt(sum_err) + (replay_ok ? "" : ", replay mismatch"));
}

}  // namespace

Mutation mutation_from_string(const std::string& name) {
  if (name == "none" || name.empty()) return Mutation::kNone;
  if (name == "gradient") return Mutation::kGradient;
  throw InvalidInput("unknown mutation '" + name + "'");
}

bool PropertyReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.passed; });
}

PropertyReport run_property_suite(std::uint64_t seed, Mutation mutation) {
  PropertyReport report;
  report.results.push_back(simplex_invariance(seed));
  report.results.push_back(reduction_consistency(seed));
  report.results.push_back(hitting_probability(seed));
  report.results.push_back(endpoint_values(seed));
  report.results.push_back(monotone_submodular(seed));
  report.results.push_back(greedy_bound(seed));
  report.results.push_back(gradient_fd(seed, mutation));
  report.results.push_back(hessian_concavity(seed));
  report.results.push_back(relaxed_symmetry(seed));
  report.results.push_back(epsilon_convergence(seed));
  report.results.push_back(game_invariants(seed));
  return report;
}

}  // namespace influence
