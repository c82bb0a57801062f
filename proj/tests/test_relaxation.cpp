#include <doctest.h>

#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "influence/generators.hpp"
#include "influence/heatmap.hpp"
#include "influence/relaxation.hpp"
#include "support.hpp"

using namespace influence;

namespace {

ZealotConfig two(VertexSet a, VertexSet b) { return ZealotConfig({std::move(a), std::move(b)}); }

RelaxPotential path_potential() { return {Eigen::Vector3d(0.0, 1.0, 0.0), 1.0}; }

RelaxPotential random_potential(int n, const ZealotConfig& z, double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
  for (Vertex i = 0; i < n; ++i)
    if (z.owner(i) < 0) phi[i] = u(rng);
  return {phi / phi.sum(), eps};
}

// Brute-force projection check: the projection p of y satisfies the KKT
// conditions p = max(y - tau, 0) for one tau.
bool is_projection(const Eigen::VectorXd& y, const Eigen::VectorXd& p, double mass) {
  if (std::abs(p.sum() - mass) > 1e-12 || p.minCoeff() < 0.0) return false;
  double tau = 0.0;
  int support = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (p[i] > 0.0) {
      tau += y[i] - p[i];
      ++support;
    }
  tau /= support;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (std::abs(p[i] - std::max(y[i] - tau, 0.0)) > 1e-12) return false;
  return true;
}

}  // namespace

TEST_CASE("single interior vertex relaxed solve") {
  const Graph g = testing::path(3);
  const ZealotConfig z = two({0}, {2});
  const RelaxedState s = solve_relaxed(g, z, 0, path_potential());
  CHECK(s.free == std::vector<Vertex>{1});
  CHECK(s.v[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(s.w_c[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(s.objective == doctest::Approx(5.0 / 9.0).epsilon(1e-14));
  CHECK(s.gradient_c[0] == doctest::Approx(1.0 / 27.0).epsilon(1e-14));
  CHECK(gradient(s)[0] == s.gradient_c[0]);
  CHECK(s.gradient_full(3)[0] == 0.0);
  CHECK(s.gradient_full(3)[1] == s.gradient_c[0]);
  const Eigen::MatrixXd h = hessian(s, g, z, 0, path_potential());
  CHECK(h(0, 0) == doctest::Approx(-2.0 / 81.0).epsilon(1e-14));
}

TEST_CASE("relaxed solve approaches the hard conversion as epsilon shrinks") {
  const Graph g = testing::path(4);
  const ZealotConfig z = two({0}, {3});
  double prev = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const RelaxedState s = solve_relaxed(g, z, 0, {Eigen::Vector4d(0.0, 0.0, 1.0, 0.0), eps});
    const double err = std::abs(s.objective - 0.75);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 1e-4);
}

TEST_CASE("potential validation") {
  const ZealotConfig z = two({0}, {2});
  CHECK_THROWS_AS(RelaxPotential({Eigen::Vector3d(0.5, 0.5, 0.0), 1.0}).validate(z), InvalidInput);
  CHECK_THROWS_AS(RelaxPotential({Eigen::Vector3d(0.0, -1.0, 0.0), 1.0}).validate(z), InvalidInput);
  CHECK_THROWS_AS(RelaxPotential({Eigen::Vector3d(0.0, 0.5, 0.0), 1.0}).validate(z), InvalidInput);
  CHECK_NOTHROW(RelaxPotential({Eigen::Vector3d(0.0, 0.5, 0.0), 1.0}).validate(z, false));
  CHECK_THROWS_AS(RelaxPotential({Eigen::Vector3d(0.0, 1.0, 0.0), 0.0}).validate(z), InvalidInput);
  const RelaxPotential u = RelaxPotential::uniform(5, two({0}, {4}), 0.2);
  CHECK(u.phi == Eigen::Matrix<double, 5, 1>(0.0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0));
}

TEST_CASE("analytic gradient matches central differences") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = random_digraph(12, 0.25, seed);
    const ZealotConfig z = two({0}, {1});
    const RelaxPotential pot = random_potential(12, z, 0.1, seed);
    const RelaxedState s = solve_relaxed(g, z, 0, pot);
    const double h = 1e-6;
    for (std::size_t k = 0; k < s.free.size(); ++k) {
      RelaxPotential up = pot;
      RelaxPotential down = pot;
      up.phi[s.free[k]] += h;
      down.phi[s.free[k]] -= h;
      const double fd = (solve_relaxed(g, z, 0, up, false).objective - solve_relaxed(g, z, 0, down, false).objective) /
                        (2 * h);
      CHECK(std::abs(fd - s.gradient_c[static_cast<Eigen::Index>(k)]) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("hessian is symmetric, negative semidefinite and matches differences of the gradient") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = random_digraph(10, 0.3, seed + 100);
    const ZealotConfig z = two({0}, {1});
    const RelaxPotential pot = random_potential(10, z, 0.2, seed);
    const RelaxedState s = solve_relaxed(g, z, 0, pot);
    const Eigen::MatrixXd hess = hessian(s, g, z, 0, pot);
    CHECK((hess - hess.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    CHECK(es.eigenvalues().maxCoeff() <= 1e-8);
    const double h = 1e-5;
    for (std::size_t k = 0; k < s.free.size(); ++k) {
      RelaxPotential up = pot;
      RelaxPotential down = pot;
      up.phi[s.free[k]] += h;
      down.phi[s.free[k]] -= h;
      const Eigen::VectorXd fd =
          (solve_relaxed(g, z, 0, up, false).gradient_c - solve_relaxed(g, z, 0, down, false).gradient_c) / (2 * h);
      CHECK((fd - hess.col(static_cast<Eigen::Index>(k))).cwiseAbs().maxCoeff() <= 1e-4);
    }
  }
}

TEST_CASE("simplex projection") {
  const Eigen::VectorXd p = project_simplex(Eigen::Vector2d(0.8, 0.8));
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(project_simplex(Eigen::Vector3d(5.0, 0.0, -1.0)) == Eigen::Vector3d(1.0, 0.0, 0.0));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd y(7);
    for (auto& x : y) x = noise(rng);
    const double mass = trial % 2 ? 1.0 : 2.5;
    CHECK(is_projection(y, project_simplex(y, mass), mass));
  }
}

TEST_CASE("projected gradient ascent converges and improves on the start") {
  const Graph g = generate(GraphSpec::random_geometric(40, 0.3, 3));
  const ZealotConfig z = two({0}, {1});
  const MaximizeResult r = maximize(g, z, 0, 0.15);
  CHECK(r.projected_gradient_norm <= 1e-7);
  CHECK(r.state.objective >= r.start_objective);
  CHECK(r.potential.phi[0] == 0.0);
  CHECK(r.potential.phi[1] == 0.0);
  CHECK(r.potential.phi.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.potential.phi.minCoeff() >= 0.0);
}

TEST_CASE("maximizer is insensitive to the start") {
  const Graph g = generate(GraphSpec::square_grid(7, 7));
  const ZealotConfig z = two({24}, {});
  const MaximizeResult base = maximize(g, z, 1, 0.15);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    MaximizeOptions opts;
    opts.start = random_potential(49, z, 0.15, seed).phi;
    const MaximizeResult r = maximize(g, z, 1, 0.15, opts);
    CHECK((r.potential.phi - base.potential.phi).cwiseAbs().maxCoeff() <= 1e-5);
  }
  CHECK(symmetry_check(g, grid_rotation(7), base.potential.phi) <= 1e-4);
  std::vector<Vertex> swap(49);
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[0], swap[24]);
  CHECK_THROWS_AS(symmetry_check(g, swap, base.potential.phi), InvalidInput);
}

TEST_CASE("iteration cap raises with the partial result") {
  MaximizeOptions opts;
  opts.max_iterations = 1;
  const Graph g = generate(GraphSpec::square_grid(7, 7));
  try {
    maximize(g, two({24}, {}), 1, 0.15, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& err) {
    CHECK(err.partial().iterations == 1);
    CHECK(err.partial().potential.phi.sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("relaxation-guided selection") {
  const Graph g = generate(GraphSpec::square_grid(11, 11));
  const TargetingProblem p(g, two({60}, {}), 1, 2);
  const TargetingSolution s = relaxed_select(p, 0.15);
  CHECK(s.chosen.size() == 2);
  CHECK(s.value == doctest::Approx(testing::oracle_value(g, two({60}, {}), 1, s.chosen)).epsilon(1e-9));
  const Vertex first = s.trace.front().vertex;
  CHECK((first == 49 || first == 59 || first == 61 || first == 71));
}

TEST_CASE("phi map and localization") {
  const Graph g = generate(GraphSpec::square_grid(11, 11));
  const PhiMapResult r = phi_map(g, two({60}, {}), 1, 0.15);
  CHECK(r.map.kind == "phi");
  CHECK(r.map.vertices.size() == 120);
  CHECK(*std::max_element(r.map.normalized.begin(), r.map.normalized.end()) == 1.0);
  CHECK(*std::min_element(r.map.normalized.begin(), r.map.normalized.end()) == 0.0);
  const double near = localization_mass(g, VertexSet{60}, r.optimum.potential.phi, 2);
  CHECK(near > 0.0);
  CHECK(near <= 1.0 + 1e-12);
  CHECK(localization_mass(g, VertexSet{60}, r.optimum.potential.phi, 20) == doctest::Approx(1.0));
}

TEST_CASE("frobenius epsilon") {
  CHECK(frobenius_epsilon(testing::path(3)) == doctest::Approx(1.0 / std::sqrt(10.0)));
}
