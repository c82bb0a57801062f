#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "influence/graph.hpp"

namespace influence {

/// Raised when a solve fails its residual check.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Free vertex counts below this use dense LU; larger systems use
/// diagonally preconditioned BiCGSTAB.
inline constexpr int kDefaultDenseLimit = 2000;
inline constexpr double kSolveTolerance = 1e-10;

/// The Schur-complement block of a Dirichlet problem,
///
///     M = L_cc + diag(penalty_c),
///
/// where c indexes the free (unpinned) vertices. Factorized once on
/// construction; solves are checked against relative residual 1e-10.
class InteriorSystem {
 public:
  /// `penalty` is either empty or length n (entries on pinned vertices are
  /// ignored). Throws InvalidInput if some free vertex cannot reach a pinned
  /// or penalized vertex, which is exactly when M is singular.
  InteriorSystem(const Graph& g, const std::vector<char>& pinned, const Eigen::VectorXd& penalty = {},
                 int dense_limit = kDefaultDenseLimit);
  ~InteriorSystem();
  InteriorSystem(InteriorSystem&&) noexcept;
  InteriorSystem& operator=(InteriorSystem&&) noexcept;

  const std::vector<Vertex>& free_vertices() const { return free_; }
  int free_count() const { return static_cast<int>(free_.size()); }
  /// Position of v among the free vertices, or -1 if pinned.
  int index_of(Vertex v) const { return index_[static_cast<std::size_t>(v)]; }
  bool dense() const;

  /// -L_{c,B} x_B for a full-length vector x (only pinned entries are read).
  Eigen::VectorXd boundary_rhs(const Eigen::VectorXd& x) const;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd solve_transposed(const Eigen::VectorXd& rhs) const;
  /// Dense M^{-1}; used by the Hessian and the factorized greedy sweep.
  Eigen::MatrixXd inverse() const;
  Eigen::MatrixXd matrix() const;

 private:
  struct Impl;
  struct BoundaryArc {
    int row;
    Vertex pinned;
    double weight;
  };
  std::vector<BoundaryArc> boundary_arcs_;
  std::vector<Vertex> free_;
  std::vector<int> index_;
  std::unique_ptr<Impl> impl_;
};

/// Solves L v = 0 on free vertices with v fixed on pinned ones, returning
/// the full vector.
Eigen::VectorXd solve_dirichlet(const Graph& g, const std::vector<char>& pinned, const Eigen::VectorXd& values,
                                int dense_limit = kDefaultDenseLimit);

}  // namespace influence
