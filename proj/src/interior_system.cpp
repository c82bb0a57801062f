#include "influence/interior_system.hpp"

#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/LU>
#include <Eigen/Sparse>

namespace influence {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Krylov = Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>>;

double relative_residual(double residual, double matrix_norm, double x_norm, double rhs_norm) {
  const double scale = matrix_norm * x_norm + rhs_norm;
  return scale > 0.0 ? residual / scale : residual;
}

}  // namespace

struct InteriorSystem::Impl {
  bool dense = true;
  Eigen::MatrixXd dense_matrix;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  SparseMatrix sparse_matrix;
  SparseMatrix sparse_transpose;
  Krylov krylov;
  Krylov krylov_transposed;
  double norm_inf = 0.0;

  template <typename Mat, typename Solver>
  Eigen::VectorXd krylov_solve(const Mat& m, Solver& solver, const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success) throw NumericalError("iterative interior solve did not converge");
    check(m * x - rhs, x, rhs);
    return x;
  }

  void check(const Eigen::VectorXd& residual, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) const {
    const double rel = relative_residual(residual.lpNorm<Eigen::Infinity>(), norm_inf, x.lpNorm<Eigen::Infinity>(),
                                         rhs.lpNorm<Eigen::Infinity>());
    if (!(rel <= kSolveTolerance))
      throw NumericalError("interior solve residual " + std::to_string(rel) + " exceeds tolerance");
  }
};

InteriorSystem::InteriorSystem(const Graph& g, const std::vector<char>& pinned, const Eigen::VectorXd& penalty,
                               int dense_limit)
    : impl_(std::make_unique<Impl>()) {
  const int n = g.size();
  if (static_cast<int>(pinned.size()) != n) throw InvalidInput("pinned mask size mismatch");
  if (penalty.size() != 0 && penalty.size() != n) throw InvalidInput("penalty size mismatch");
  index_.assign(static_cast<std::size_t>(n), -1);
  for (Vertex v = 0; v < n; ++v)
    if (!pinned[static_cast<std::size_t>(v)]) {
      index_[static_cast<std::size_t>(v)] = static_cast<int>(free_.size());
      free_.push_back(v);
    }
  const int m = free_count();
  auto pen = [&](Vertex v) { return penalty.size() ? penalty[v] : 0.0; };

  // Weakly chained diagonal dominance: M is nonsingular iff every free row
  // reaches a strictly dominant row (an arc into the boundary or a positive
  // penalty) through arcs among free vertices.
  std::vector<char> anchored(static_cast<std::size_t>(m), 0);
  std::vector<std::vector<int>> incoming(static_cast<std::size_t>(m));
  std::vector<int> stack;
  for (int r = 0; r < m; ++r) {
    const Vertex v = free_[static_cast<std::size_t>(r)];
    bool strict = pen(v) > 0.0;
    for (const Arc& a : g.out_arcs(v)) {
      if (a.weight <= 0.0) continue;
      const int col = index_[static_cast<std::size_t>(a.target)];
      if (col < 0) {
        strict = true;
        boundary_arcs_.push_back({r, a.target, a.weight});
      } else {
        incoming[static_cast<std::size_t>(col)].push_back(r);
      }
    }
    if (strict) {
      anchored[static_cast<std::size_t>(r)] = 1;
      stack.push_back(r);
    }
  }
  while (!stack.empty()) {
    const int r = stack.back();
    stack.pop_back();
    for (int s : incoming[static_cast<std::size_t>(r)])
      if (!anchored[static_cast<std::size_t>(s)]) {
        anchored[static_cast<std::size_t>(s)] = 1;
        stack.push_back(s);
      }
  }
  for (int r = 0; r < m; ++r)
    if (!anchored[static_cast<std::size_t>(r)])
      throw InvalidInput("interior system is singular: vertex " + std::to_string(free_[static_cast<std::size_t>(r)]) +
                         " cannot reach a boundary vertex");

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd row_abs = Eigen::VectorXd::Zero(m);
  for (int r = 0; r < m; ++r) {
    const Vertex v = free_[static_cast<std::size_t>(r)];
    const double diag = g.out_degree(v) + pen(v);
    triplets.emplace_back(r, r, diag);
    row_abs[r] += std::abs(diag);
    for (const Arc& a : g.out_arcs(v)) {
      const int col = index_[static_cast<std::size_t>(a.target)];
      if (col >= 0) {
        triplets.emplace_back(r, col, -a.weight);
        row_abs[r] += a.weight;
      }
    }
  }
  impl_->norm_inf = m > 0 ? row_abs.maxCoeff() : 0.0;
  impl_->dense = m < dense_limit;
  if (m == 0) return;
  if (impl_->dense) {
    impl_->dense_matrix = Eigen::MatrixXd::Zero(m, m);
    for (const auto& t : triplets) impl_->dense_matrix(t.row(), t.col()) += t.value();
    impl_->lu.compute(impl_->dense_matrix);
  } else {
    impl_->sparse_matrix.resize(m, m);
    impl_->sparse_matrix.setFromTriplets(triplets.begin(), triplets.end());
    impl_->sparse_transpose = impl_->sparse_matrix.transpose();
    impl_->krylov.setTolerance(1e-14);
    impl_->krylov.setMaxIterations(20 * m + 1000);
    impl_->krylov.compute(impl_->sparse_matrix);
    impl_->krylov_transposed.setTolerance(1e-14);
    impl_->krylov_transposed.setMaxIterations(20 * m + 1000);
    impl_->krylov_transposed.compute(impl_->sparse_transpose);
  }
}

InteriorSystem::~InteriorSystem() = default;
InteriorSystem::InteriorSystem(InteriorSystem&&) noexcept = default;
InteriorSystem& InteriorSystem::operator=(InteriorSystem&&) noexcept = default;

bool InteriorSystem::dense() const { return impl_->dense; }

Eigen::VectorXd InteriorSystem::boundary_rhs(const Eigen::VectorXd& x) const {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(free_count());
  for (const auto& b : boundary_arcs_) rhs[b.row] += b.weight * x[b.pinned];
  return rhs;
}

Eigen::VectorXd InteriorSystem::solve(const Eigen::VectorXd& rhs) const {
  if (free_count() == 0) return {};
  if (impl_->dense) {
    Eigen::VectorXd x = impl_->lu.solve(rhs);
    impl_->check(impl_->dense_matrix * x - rhs, x, rhs);
    return x;
  }
  return impl_->krylov_solve(impl_->sparse_matrix, impl_->krylov, rhs);
}

Eigen::VectorXd InteriorSystem::solve_transposed(const Eigen::VectorXd& rhs) const {
  if (free_count() == 0) return {};
  if (impl_->dense) {
    Eigen::VectorXd x = impl_->lu.transpose().solve(rhs);
    impl_->check(impl_->dense_matrix.transpose() * x - rhs, x, rhs);
    return x;
  }
  return impl_->krylov_solve(impl_->sparse_transpose, impl_->krylov_transposed, rhs);
}

Eigen::MatrixXd InteriorSystem::inverse() const {
  const int m = free_count();
  if (impl_->dense) return impl_->lu.inverse();
  Eigen::MatrixXd inv(m, m);
  for (int j = 0; j < m; ++j) inv.col(j) = solve(Eigen::VectorXd::Unit(m, j));
  return inv;
}

Eigen::MatrixXd InteriorSystem::matrix() const {
  if (impl_->dense) return impl_->dense_matrix;
  return Eigen::MatrixXd(impl_->sparse_matrix);
}

Eigen::VectorXd solve_dirichlet(const Graph& g, const std::vector<char>& pinned, const Eigen::VectorXd& values,
                                int dense_limit) {
  InteriorSystem sys(g, pinned, {}, dense_limit);
  Eigen::VectorXd full = values;
  const Eigen::VectorXd interior = sys.solve(sys.boundary_rhs(values));
  for (int r = 0; r < sys.free_count(); ++r) full[sys.free_vertices()[static_cast<std::size_t>(r)]] = interior[r];
  return full;
}

}  // namespace influence
