#include <doctest.h>

#include <random>

#include "influence/generators.hpp"
#include "influence/interior_system.hpp"
#include "influence/opinion.hpp"
#include "support.hpp"

using namespace influence;

namespace {

ZealotConfig two(VertexSet a, VertexSet b) { return ZealotConfig({std::move(a), std::move(b)}); }

}  // namespace

TEST_CASE("zealot config validation") {
  CHECK_THROWS_AS(ZealotConfig({VertexSet{0}}), InvalidInput);
  CHECK_THROWS_AS(two({0, 1}, {1}), InvalidInput);
  const ZealotConfig z = two({0}, {3, 4});
  CHECK(z.owner(4) == 1);
  CHECK(z.owner(2) == -1);
  CHECK(z.opposing(0) == VertexSet{3, 4});
  CHECK(z.all() == VertexSet{0, 3, 4});
  CHECK(z.with(0, 2)[0] == VertexSet{0, 2});
  CHECK_THROWS_AS(z.check_range(4), InvalidInput);
  CHECK(ZealotConfig(std::vector<VertexSet>(2)).empty());
}

TEST_CASE("3-path middle vertex splits evenly") {
  const OpinionField u = solve_harmonic(testing::path(3), two({0}, {2}));
  CHECK(u.values(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(u.values(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(influence::influence(u, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("K4 with apex leaves the uncovered vertex at 3/4") {
  const OpinionField u = solve_harmonic(testing::k4_apex(), two({0, 1, 2}, {4}));
  CHECK(std::abs(u.values(3, 0) - 0.75) <= 1e-10);
  CHECK(std::abs(u.values(3, 1) - 0.25) <= 1e-10);
  CHECK(std::abs(influence::influence(u, 0) - 0.75) <= 1e-10);
}

TEST_CASE("4-path gives the gambler's ruin profile") {
  const OpinionField u = solve_harmonic(testing::path(4), two({0}, {3}));
  const double expected[] = {1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0};
  for (int i = 0; i < 4; ++i) CHECK(u.values(i, 0) == doctest::Approx(expected[i]).epsilon(1e-13));
}

TEST_CASE("grouped solve pins T and matches the oracle") {
  const ScalarOpinion v = solve_grouped(testing::path(4), two({0}, {3}), 0, VertexSet{2});
  CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v[2] == 1.0);
  CHECK(v[3] == 0.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_digraph(15, 0.2, seed);
    const ZealotConfig z = two({0, 5}, {9});
    const VertexSet t{3, 12};
    const ScalarOpinion got = solve_grouped(g, z, 0, t);
    CHECK((got - testing::oracle_grouped(g, z, 0, t)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("grouped solve rejects bad input") {
  const Graph g = testing::path(4);
  CHECK_THROWS_AS(solve_grouped(g, two({0}, {3}), 0, VertexSet{3}), InvalidInput);
  CHECK_THROWS_AS(solve_grouped(g, two({0}, {3}), 2), InvalidInput);
  CHECK_THROWS_AS(solve_grouped(g, ZealotConfig(std::vector<VertexSet>(2)), 0), InvalidInput);
  CHECK_THROWS_AS(solve_harmonic(g, ZealotConfig(std::vector<VertexSet>(2))), InvalidInput);
  const Graph split = Graph::from_edges(3, {{0, 1}, {1, 0}, {2, 0}}, true);
  CHECK_THROWS_AS(solve_harmonic(split, two({0}, {1})), InvalidInput);
}

TEST_CASE("grouped solve without opponents is one everywhere") {
  const ScalarOpinion v = solve_grouped(testing::path(5), two({2}, {}), 0);
  CHECK((v.array() - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("three opinions stay on the simplex and reduce to grouped solves") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_digraph(20, 0.15, seed);
    const ZealotConfig z({VertexSet{0}, VertexSet{7, 8}, VertexSet{15}});
    const OpinionField u = solve_harmonic(g, z);
    CHECK(u.max_row_sum_error() <= 1e-9);
    CHECK(u.min_entry() >= -1e-12);
    double total = 0.0;
    for (int m = 0; m < 3; ++m) {
      total += influence::influence(u, m);
      CHECK((u.values.col(m) - solve_grouped(g, z, m)).cwiseAbs().maxCoeff() <= 1e-9);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("maximum principle on the grid") {
  const Graph g = generate(GraphSpec::square_grid(11, 11));
  const ScalarOpinion v = solve_grouped(g, two({60}, {0}), 0);
  for (Vertex i = 0; i < g.size(); ++i) {
    if (i == 60 || i == 0) continue;
    CHECK(v[i] > 0.0);
    CHECK(v[i] < 1.0);
  }
}

TEST_CASE("sparse and dense paths agree") {
  const Graph g = generate(GraphSpec::random_geometric(200, 0.15, 4));
  const ZealotConfig z = two({0, 1}, {100});
  const ScalarOpinion dense = solve_grouped(g, z, 0, VertexSet{50});
  const ScalarOpinion sparse = solve_grouped(g, z, 0, VertexSet{50}, 10);
  CHECK((dense - sparse).cwiseAbs().maxCoeff() <= 1e-9);
  std::vector<char> pinned(200, 0);
  pinned[0] = pinned[1] = pinned[100] = 1;
  CHECK(InteriorSystem(g, pinned).dense());
  CHECK_FALSE(InteriorSystem(g, pinned, {}, 10).dense());
}

TEST_CASE("interior system transposed solve and inverse") {
  const Graph g = random_digraph(10, 0.3, 2);
  std::vector<char> pinned(10, 0);
  pinned[0] = pinned[4] = 1;
  for (int limit : {kDefaultDenseLimit, 2}) {
    const InteriorSystem sys(g, pinned, {}, limit);
    const Eigen::MatrixXd m = sys.matrix();
    const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(sys.free_count(), 1.0, 2.0);
    CHECK((m * sys.solve(b) - b).norm() <= 1e-9);
    CHECK((m.transpose() * sys.solve_transposed(b) - b).norm() <= 1e-9);
    CHECK((m * sys.inverse() - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-9);
  }
  CHECK(InteriorSystem(g, pinned).index_of(0) == -1);
}

TEST_CASE("a free component that reaches no pinned vertex is singular") {
  // 2 -> 3 -> 2 never reaches the pinned vertex 0.
  const Graph g = Graph::from_edges(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {1, 2}}, true);
  std::vector<char> pinned{1, 0, 0, 0};
  CHECK_THROWS_AS(InteriorSystem(g, pinned), InvalidInput);
}

TEST_CASE("dirichlet energy") {
  const Graph g = testing::path(3);
  const OpinionField u = solve_harmonic(g, two({0}, {2}));
  CHECK(dirichlet_energy(g, u) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(dirichlet_energy(g, ScalarOpinion(ScalarOpinion::Constant(3, 0.3))) == 0.0);
  for (double d : {0.1, -0.1}) {
    OpinionField p = u;
    p.values(1, 0) += d;
    p.values(1, 1) -= d;
    CHECK(dirichlet_energy(g, p) > dirichlet_energy(g, u));
  }
  CHECK_THROWS_AS(dirichlet_energy(generate(GraphSpec::directed_cycle(4)), u), InvalidInput);
}

TEST_CASE("harmonic field minimizes energy among same-boundary fields") {
  const Graph g = generate(GraphSpec::random_geometric(30, 0.45, 9));
  const ZealotConfig z = two({0, 1}, {2});
  const ScalarOpinion v = solve_grouped(g, z, 0);
  const double base = dirichlet_energy(g, v);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int trial = 0; trial < 50; ++trial) {
    ScalarOpinion p = v;
    for (Vertex i = 3; i < g.size(); ++i) p[i] += noise(rng);
    CHECK(dirichlet_energy(g, p) >= base);
  }
}

TEST_CASE("dynamics converge to the harmonic field and stay on the simplex") {
  const Graph g = testing::path(3);
  const ZealotConfig z = two({0}, {2});
  OpinionField u0{Eigen::MatrixXd(3, 2)};
  u0.values << 1, 0, 1, 0, 0, 1;
  const OpinionField u = simulate_dynamics(g, z, u0, 0.2, 2000);
  CHECK(u.values(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
  const OpinionField h = solve_harmonic(g, z);
  CHECK((simulate_dynamics(g, z, h, 0.2, 100).values - h.values).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(simulate_dynamics(g, z, u0, 0.6, 10), InvalidInput);

  const Graph r = generate(GraphSpec::random_geometric(60, 0.25, 5));
  const ZealotConfig rz = two({0}, {1});
  OpinionField start{Eigen::MatrixXd::Constant(60, 2, 0.5)};
  start.values.row(0) << 1, 0;
  start.values.row(1) << 0, 1;
  const OpinionField end = simulate_dynamics(r, rz, start, 0.9 / r.max_out_degree(), 10000);
  CHECK(end.max_row_sum_error() <= 1e-9);
  CHECK(end.min_entry() >= -1e-12);
}

TEST_CASE("monte carlo hitting probability") {
  const Graph g = testing::path(4);
  const ZealotConfig z = two({0}, {3});
  CHECK(mc_hitting_probability(g, z, 0, 0, 10, 1).probability == 1.0);
  CHECK(mc_hitting_probability(g, z, 0, 3, 10, 1).probability == 0.0);
  const HittingEstimate est = mc_hitting_probability(g, z, 0, 1, 100000, 7);
  CHECK(est.walks == 100000);
  CHECK(std::abs(est.probability - 2.0 / 3.0) <= 3.0 * est.std_error);
  CHECK(est.std_error == doctest::Approx(std::sqrt(est.probability * (1 - est.probability) / 1e5)));
  const HittingEstimate again = mc_hitting_probability(g, z, 0, 1, 100000, 7);
  CHECK(again.probability == est.probability);
  CHECK_THROWS_AS(mc_hitting_probability(g, z, 0, 1, 1000, 7, 1), NumericalError);
}

TEST_CASE("relabeling permutes the solution") {
  const Graph g = random_digraph(12, 0.25, 8);
  std::vector<Vertex> perm(12);
  for (int i = 0; i < 12; ++i) perm[static_cast<std::size_t>(i)] = (5 * i + 3) % 12;
  const ZealotConfig z = two({0}, {6});
  const ZealotConfig pz = two({perm[0]}, {perm[6]});
  const ScalarOpinion v = solve_grouped(g, z, 0);
  const ScalarOpinion pv = solve_grouped(relabel(g, perm), pz, 0);
  for (int i = 0; i < 12; ++i) CHECK(std::abs(pv[perm[static_cast<std::size_t>(i)]] - v[i]) <= 1e-12);
}
