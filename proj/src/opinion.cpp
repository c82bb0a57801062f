#include "influence/opinion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace influence {

ZealotConfig::ZealotConfig(std::vector<VertexSet> sets) : sets_(std::move(sets)) {
  if (sets_.size() < 2) throw InvalidInput("zealot configuration needs k >= 2 opinions");
  for (std::size_t a = 0; a < sets_.size(); ++a)
    for (std::size_t b = a + 1; b < sets_.size(); ++b)
      if (sets_[a].intersects(sets_[b]))
        throw InvalidInput("zealot sets " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " overlap");
}

VertexSet ZealotConfig::all() const {
  VertexSet u;
  for (const auto& s : sets_) u = u.united(s);
  return u;
}

VertexSet ZealotConfig::opposing(int opinion) const {
  VertexSet u;
  for (int l = 0; l < k(); ++l)
    if (l != opinion) u = u.united(sets_[static_cast<std::size_t>(l)]);
  return u;
}

bool ZealotConfig::empty() const {
  return std::all_of(sets_.begin(), sets_.end(), [](const VertexSet& s) { return s.empty(); });
}

int ZealotConfig::owner(Vertex v) const {
  for (int l = 0; l < k(); ++l)
    if (sets_[static_cast<std::size_t>(l)].contains(v)) return l;
  return -1;
}

void ZealotConfig::check_range(int n) const {
  for (const auto& s : sets_) s.check_range(n);
}

ZealotConfig ZealotConfig::with(int opinion, Vertex v) const {
  std::vector<VertexSet> sets = sets_;
  sets.at(static_cast<std::size_t>(opinion)) = sets[static_cast<std::size_t>(opinion)].with(v);
  return ZealotConfig(std::move(sets));
}

double OpinionField::max_row_sum_error() const {
  if (values.rows() == 0) return 0.0;
  return (values.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

double OpinionField::min_entry() const { return values.size() ? values.minCoeff() : 0.0; }

namespace detail {

void require_strongly_connected(const Graph& g) {
  if (!is_strongly_connected(g)) throw InvalidInput("graph is not strongly connected");
}

GroupedBoundary grouped_boundary(int n, const ZealotConfig& z, int m, const VertexSet& extra) {
  GroupedBoundary b{std::vector<char>(static_cast<std::size_t>(n), 0), Eigen::VectorXd::Zero(n)};
  for (int l = 0; l < z.k(); ++l)
    for (Vertex v : z[l]) {
      b.pinned[static_cast<std::size_t>(v)] = 1;
      b.values[v] = (l == m) ? 1.0 : 0.0;
    }
  for (Vertex v : extra) {
    b.pinned[static_cast<std::size_t>(v)] = 1;
    b.values[v] = 1.0;
  }
  return b;
}

ScalarOpinion solve_grouped_unchecked(const Graph& g, const ZealotConfig& z, int m, const VertexSet& extra,
                                      int dense_limit) {
  const auto b = grouped_boundary(g.size(), z, m, extra);
  return solve_dirichlet(g, b.pinned, b.values, dense_limit);
}

}  // namespace detail

OpinionField solve_harmonic(const Graph& g, const ZealotConfig& z, int dense_limit) {
  z.check_range(g.size());
  if (z.empty()) throw InvalidInput("zealot union is empty; the harmonic problem is singular");
  detail::require_strongly_connected(g);
  const int n = g.size();
  std::vector<char> pinned(static_cast<std::size_t>(n), 0);
  for (Vertex v : z.all()) pinned[static_cast<std::size_t>(v)] = 1;
  InteriorSystem sys(g, pinned, {}, dense_limit);
  OpinionField u{Eigen::MatrixXd::Zero(n, z.k())};
  for (int l = 0; l < z.k(); ++l) {
    Eigen::VectorXd boundary = Eigen::VectorXd::Zero(n);
    for (Vertex v : z[l]) boundary[v] = 1.0;
    const Eigen::VectorXd interior = sys.solve(sys.boundary_rhs(boundary));
    u.values.col(l) = boundary;
    for (int r = 0; r < sys.free_count(); ++r) u.values(sys.free_vertices()[static_cast<std::size_t>(r)], l) = interior[r];
  }
  return u;
}

ScalarOpinion solve_grouped(const Graph& g, const ZealotConfig& z, int m, const VertexSet& extra, int dense_limit) {
  z.check_range(g.size());
  extra.check_range(g.size());
  if (m < 0 || m >= z.k()) throw InvalidInput("opinion index out of range");
  if (extra.intersects(z.all())) throw InvalidInput("converted set overlaps the zealots");
  if (z.empty() && extra.empty()) throw InvalidInput("no boundary vertices; the grouped problem is singular");
  detail::require_strongly_connected(g);
  return detail::solve_grouped_unchecked(g, z, m, extra, dense_limit);
}

double influence(const OpinionField& u, int m) {
  if (m < 0 || m >= u.k()) throw InvalidInput("opinion index out of range");
  return u.values.col(m).sum() / static_cast<double>(u.size());
}

double influence(const ScalarOpinion& v) { return v.sum() / static_cast<double>(v.size()); }

double dirichlet_energy(const Graph& g, const OpinionField& u) {
  if (g.directed()) throw InvalidInput("Dirichlet energy requires an undirected graph");
  if (u.size() != g.size()) throw InvalidInput("field size mismatch");
  double e = 0.0;
  for (const auto& edge : g.edges()) {
    const auto diff = u.values.row(edge.source) - u.values.row(edge.target);
    e += edge.weight * diff.squaredNorm();
  }
  // <x, L x> = sum over undirected edges of w (x_i - x_j)^2.
  return 0.5 * e;
}

double dirichlet_energy(const Graph& g, const ScalarOpinion& v) {
  return dirichlet_energy(g, OpinionField{Eigen::MatrixXd(v)});
}

OpinionField simulate_dynamics(const Graph& g, const ZealotConfig& z, const OpinionField& u0, double dt, long steps) {
  const int n = g.size();
  z.check_range(n);
  if (u0.size() != n || u0.k() != z.k()) throw InvalidInput("initial field shape mismatch");
  if (!(dt > 0.0) || !(dt < 1.0 / g.max_out_degree()))
    throw InvalidInput("time step must satisfy 0 < dt < 1/max out-degree");
  if (u0.max_row_sum_error() > 1e-9 || u0.min_entry() < -1e-12)
    throw InvalidInput("initial opinions must lie on the simplex");
  for (int l = 0; l < z.k(); ++l)
    for (Vertex v : z[l])
      for (int c = 0; c < z.k(); ++c)
        if (u0.values(v, c) != (c == l ? 1.0 : 0.0))
          throw InvalidInput("initial zealot opinion does not match its extreme opinion");
  std::vector<char> pinned(static_cast<std::size_t>(n), 0);
  for (Vertex v : z.all()) pinned[static_cast<std::size_t>(v)] = 1;

  Eigen::MatrixXd u = u0.values;
  Eigen::MatrixXd next(n, z.k());
  for (long s = 0; s < steps; ++s) {
    for (Vertex i = 0; i < n; ++i) {
      if (pinned[static_cast<std::size_t>(i)]) {
        next.row(i) = u.row(i);
        continue;
      }
      // u(i) + dt * sum_j a_ij (u(j) - u(i)), written as a convex combination.
      Eigen::RowVectorXd acc = (1.0 - dt * g.out_degree(i)) * u.row(i);
      for (const Arc& a : g.out_arcs(i)) acc += dt * a.weight * u.row(a.target);
      next.row(i) = acc;
    }
    u.swap(next);
  }
  return OpinionField{u};
}

namespace {

constexpr long kWalkBlock = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

HittingEstimate mc_hitting_probability(const Graph& g, const ZealotConfig& z, int m, Vertex start, long walks,
                                       std::uint64_t seed, long step_cap) {
  const int n = g.size();
  z.check_range(n);
  if (m < 0 || m >= z.k()) throw InvalidInput("opinion index out of range");
  if (start < 0 || start >= n) throw InvalidInput("start vertex out of range");
  if (walks < 1) throw InvalidInput("need at least one walk");
  if (z.empty()) throw InvalidInput("zealot union is empty");
  detail::require_strongly_connected(g);
  const int owner = z.owner(start);
  if (owner >= 0) return HittingEstimate{owner == m ? 1.0 : 0.0, 0.0, walks};

  // 0 = free, 1 = Z_m, 2 = opposing.
  std::vector<std::uint8_t> kind(static_cast<std::size_t>(n), 0);
  for (int l = 0; l < z.k(); ++l)
    for (Vertex v : z[l]) kind[static_cast<std::size_t>(v)] = (l == m) ? 1 : 2;
  std::vector<std::vector<double>> cumulative(static_cast<std::size_t>(n));
  for (Vertex i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const Arc& a : g.out_arcs(i)) cumulative[static_cast<std::size_t>(i)].push_back(acc += a.weight);
  }

  const long blocks = (walks + kWalkBlock - 1) / kWalkBlock;
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(std::min<long>(blocks, 64))));
  std::vector<long> hits(workers, 0);
  std::vector<char> overflow(workers, 0);
  auto run = [&](unsigned w) {
    for (long b = w; b < blocks; b += workers) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(b))));
      const long count = std::min(kWalkBlock, walks - b * kWalkBlock);
      for (long k = 0; k < count; ++k) {
        Vertex x = start;
        long steps = 0;
        while (kind[static_cast<std::size_t>(x)] == 0) {
          if (++steps > step_cap) {
            overflow[w] = 1;
            return;
          }
          const auto& cum = cumulative[static_cast<std::size_t>(x)];
          const double r = static_cast<double>(rng() >> 11) * 0x1.0p-53 * cum.back();
          const auto idx = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), r) - cum.begin());
          x = g.out_arcs(x)[std::min(idx, cum.size() - 1)].target;
        }
        if (kind[static_cast<std::size_t>(x)] == 1) ++hits[w];
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  if (std::any_of(overflow.begin(), overflow.end(), [](char c) { return c != 0; }))
    throw NumericalError("random walk exceeded the step cap of " + std::to_string(step_cap));
  long total = 0;
  for (long h : hits) total += h;
  HittingEstimate est;
  est.walks = walks;
  est.probability = static_cast<double>(total) / static_cast<double>(walks);
  est.std_error = std::sqrt(est.probability * (1.0 - est.probability) / static_cast<double>(walks));
  return est;
}

}  // namespace influence
