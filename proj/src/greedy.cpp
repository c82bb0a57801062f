#include "influence/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace influence {

namespace {

void validate_problem(const TargetingProblem& p) {
  if (!p.graph) throw InvalidInput("targeting problem has no graph");
  p.zealots.check_range(p.graph->size());
  if (p.m < 0 || p.m >= p.zealots.k()) throw InvalidInput("authority index out of range");
  if (p.budget < 0) throw InvalidInput("budget must be nonnegative");
  const auto free = static_cast<int>(p.graph->size() - p.zealots.all().size());
  if (p.budget > free)
    throw InvalidInput("budget " + std::to_string(p.budget) + " exceeds the " + std::to_string(free) +
                       " available vertices");
}

std::string set_string(const VertexSet& s) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (Vertex v : s) {
    out << (first ? "" : ",") << v;
    first = false;
  }
  out << '}';
  return out.str();
}

// Index of the chosen entry among `values` (all within kTieTolerance of the
// max are tied, `values` sorted by vertex id).
std::size_t pick_best(const std::vector<std::pair<Vertex, double>>& values, TieBreak tie, std::mt19937_64& rng) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [v, val] : values) best = std::max(best, val);
  std::vector<std::size_t> tied;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (values[k].second >= best - kTieTolerance) tied.push_back(k);
  if (tie == TieBreak::kLowestId || tied.size() == 1) return tied.front();
  return tied[static_cast<std::size_t>(rng() % tied.size())];
}

}  // namespace

TargetingProblem::TargetingProblem(std::shared_ptr<const Graph> g, ZealotConfig z, int authority, int t)
    : graph(std::move(g)), zealots(std::move(z)), m(authority), budget(t) {
  validate_problem(*this);
}

TargetingProblem::TargetingProblem(const Graph& g, ZealotConfig z, int authority, int t)
    : TargetingProblem(std::make_shared<const Graph>(g), std::move(z), authority, t) {}

std::vector<Vertex> TargetingProblem::candidates() const {
  const VertexSet z = zealots.all();
  std::vector<Vertex> c;
  for (Vertex v = 0; v < graph->size(); ++v)
    if (!z.contains(v)) c.push_back(v);
  return c;
}

double set_value(const TargetingProblem& p, const VertexSet& t) {
  return influence(solve_grouped(*p.graph, p.zealots, p.m, t));
}

std::vector<std::pair<Vertex, double>> marginal_values(const TargetingProblem& p, const VertexSet& t,
                                                       bool factorized) {
  const Graph& g = *p.graph;
  const int n = g.size();
  t.check_range(n);
  if (t.intersects(p.zealots.all())) throw InvalidInput("converted set overlaps the zealots");
  detail::require_strongly_connected(g);
  std::vector<std::pair<Vertex, double>> out;
  const VertexSet z = p.zealots.all();

  if (!factorized || (p.zealots.empty() && t.empty())) {
    for (Vertex i = 0; i < n; ++i)
      if (!z.contains(i) && !t.contains(i))
        out.emplace_back(i, influence(detail::solve_grouped_unchecked(g, p.zealots, p.m, t.with(i))));
    return out;
  }

  // Pinning free vertex i to 1 adds (1 - v_i) * M^{-1} e_i / (M^{-1})_ii to the
  // current solution, since that column is harmonic off i and vanishes on
  // the boundary.
  const auto b = detail::grouped_boundary(n, p.zealots, p.m, t);
  InteriorSystem sys(g, b.pinned);
  Eigen::VectorXd v = b.values;
  const Eigen::VectorXd interior = sys.solve(sys.boundary_rhs(b.values));
  for (int r = 0; r < sys.free_count(); ++r) v[sys.free_vertices()[static_cast<std::size_t>(r)]] = interior[r];
  const double base = v.sum();
  const Eigen::MatrixXd inv = sys.inverse();
  const Eigen::RowVectorXd colsum = inv.colwise().sum();
  for (int r = 0; r < sys.free_count(); ++r) {
    const Vertex i = sys.free_vertices()[static_cast<std::size_t>(r)];
    const double gain = (1.0 - v[i]) * colsum[r] / inv(r, r);
    out.emplace_back(i, (base + gain) / n);
  }
  return out;
}

TargetingSolution greedy(const TargetingProblem& p, const GreedyOptions& opts) {
  validate_problem(p);
  if (p.zealots.empty()) throw InvalidInput("greedy needs a nonempty zealot union");
  std::mt19937_64 rng(opts.seed);
  TargetingSolution sol;
  double current = set_value(p, {});
  for (int round = 0; round < p.budget; ++round) {
    const auto values = marginal_values(p, sol.chosen, opts.factorized);
    const auto& [vertex, value] = values[pick_best(values, opts.tie_break, rng)];
    sol.trace.push_back({vertex, value - current});
    sol.chosen = sol.chosen.with(vertex);
    current = value;
  }
  sol.value = set_value(p, sol.chosen);
  return sol;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

TargetingSolution brute_force(const TargetingProblem& p, double cap) {
  validate_problem(p);
  const auto cand = p.candidates();
  const int c = static_cast<int>(cand.size());
  const int t = p.budget;
  if (binomial(c, t) > cap)
    throw InvalidInput("brute force would enumerate " + std::to_string(binomial(c, t)) + " subsets (cap " +
                       std::to_string(cap) + ")");
  std::vector<int> idx(static_cast<std::size_t>(t));
  for (int k = 0; k < t; ++k) idx[static_cast<std::size_t>(k)] = k;
  TargetingSolution best;
  best.value = -std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<Vertex> ids;
    for (int k : idx) ids.push_back(cand[static_cast<std::size_t>(k)]);
    VertexSet set(std::move(ids));
    const double value = set_value(p, set);
    // Lexicographic enumeration order: only a strict improvement replaces.
    if (value > best.value + kTieTolerance) {
      best.value = value;
      best.chosen = set;
    }
    int k = t - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == c - t + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < t; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

std::string SubmodularViolation::describe() const {
  std::ostringstream out;
  if (kind == Kind::kMonotone) {
    out << "monotonicity: F(" << set_string(superset) << ")=" << lhs << " < F(" << set_string(base) << ")=" << rhs;
  } else {
    out << "submodularity: T=" << set_string(base) << " x=" << x << " y=" << y << " gain(x|T)=" << lhs
        << " < gain(x|T+y)=" << rhs;
  }
  return out.str();
}

SubmodularReport check_submodular(const Graph& g, const ZealotConfig& z, int m, const SubmodularCheckOptions& opts) {
  const TargetingProblem p(g, z, m, 0);
  validate_problem(p);
  const auto cand = p.candidates();
  const int c = static_cast<int>(cand.size());
  auto to_set = [&](std::uint32_t mask) {
    std::vector<Vertex> ids;
    for (int b = 0; b < c; ++b)
      if (mask >> b & 1u) ids.push_back(cand[static_cast<std::size_t>(b)]);
    return VertexSet(std::move(ids));
  };
  auto value_of = [&](const VertexSet& s) { return opts.value_override ? opts.value_override(s) : set_value(p, s); };

  SubmodularReport report;
  auto check_pair = [&](double f_super, double f_sub, const VertexSet& super, const VertexSet& sub) {
    ++report.monotone_checks;
    if (f_super < f_sub - opts.tolerance)
      report.violations.push_back({SubmodularViolation::Kind::kMonotone, sub, -1, -1, super, f_super, f_sub});
  };
  auto check_dr = [&](double gain_x, double gain_x_after_y, const VertexSet& t, Vertex x, Vertex y) {
    ++report.submodular_checks;
    if (gain_x < gain_x_after_y - opts.tolerance)
      report.violations.push_back({SubmodularViolation::Kind::kSubmodular, t, x, y, {}, gain_x, gain_x_after_y});
  };

  if (opts.samples <= 0) {
    if (c > 20) throw InvalidInput("exhaustive submodularity check limited to 20 free vertices");
    const std::uint32_t full = (c == 32) ? ~0u : ((1u << c) - 1u);
    std::vector<double> f(static_cast<std::size_t>(full) + 1);
    for (std::uint32_t mask = 0; mask <= full; ++mask) f[mask] = value_of(to_set(mask));
    for (std::uint32_t sup = 0; sup <= full; ++sup)
      for (std::uint32_t sub = sup;; sub = (sub - 1) & sup) {
        if (sub != sup) check_pair(f[sup], f[sub], to_set(sup), to_set(sub));
        if (sub == 0) break;
      }
    for (std::uint32_t t = 0; t <= full; ++t)
      for (int xb = 0; xb < c; ++xb) {
        if (t >> xb & 1u) continue;
        for (int yb = 0; yb < c; ++yb) {
          if (yb == xb || (t >> yb & 1u)) continue;
          const std::uint32_t tx = t | 1u << xb;
          const std::uint32_t ty = t | 1u << yb;
          check_dr(f[tx] - f[t], f[tx | ty] - f[ty], to_set(t), cand[static_cast<std::size_t>(xb)],
                   cand[static_cast<std::size_t>(yb)]);
        }
      }
    return report;
  }

  if (c < 2) return report;
  std::mt19937_64 rng(opts.seed);
  for (long s = 0; s < opts.samples; ++s) {
    std::vector<Vertex> pool = cand;
    std::shuffle(pool.begin(), pool.end(), rng);
    const Vertex x = pool[0];
    const Vertex y = pool[1];
    const auto size = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(c - 1));
    const VertexSet t(std::vector<Vertex>(pool.begin() + 2, pool.begin() + 2 + static_cast<long>(std::min<std::size_t>(size, pool.size() - 2))));
    const double ft = value_of(t);
    const double ftx = value_of(t.with(x));
    const double fty = value_of(t.with(y));
    const double ftxy = value_of(t.with(x).with(y));
    check_pair(ftx, ft, t.with(x), t);
    check_pair(ftxy, fty, t.with(x).with(y), t.with(y));
    check_dr(ftx - ft, ftxy - fty, t, x, y);
  }
  return report;
}

}  // namespace influence
