#pragma once

/// @file linalg.hpp
/// @brief Numerical kernel: sparse/dense storage, direct solves and the
/// smallest eigenpair of a symmetric matrix.
///
/// Storage and factorizations are backed by Eigen. The wrappers pin down the
/// contracts the rest of the library relies on: relative residual checks,
/// singularity reporting with a pivot index, and the algebraically smallest
/// eigenvalue for the stability analysis of the flux Schur complement.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <memory>
#include <vector>

namespace mdfc::linalg {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
/// Compressed row storage; column indices sorted, duplicates summed.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// Assemble a finalized CSR matrix, summing duplicate entries.
SparseMatrix from_triplets(Index rows, Index cols, const std::vector<Triplet>& entries);

/// Largest absolute entry, 0 for an empty matrix.
double max_abs(const SparseMatrix& m);
double max_abs(const DenseMatrix& m);

/// ||A x - b|| / (||A|| ||x|| + ||b||) in the Frobenius/Euclidean norms.
double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b);
double relative_residual(const DenseMatrix& a, const Vector& x, const Vector& b);

/// Square dense matrix that is symmetric to 1e-12 relative when flagged so.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  /// Throws std::invalid_argument if the matrix is not square or, when
  /// @p symmetric is set, deviates from its transpose by more than
  /// 1e-12 * max|m|. The stored matrix is exactly symmetrized.
  explicit DenseSymMatrix(DenseMatrix m, bool symmetric = true);

  const DenseMatrix& matrix() const { return data_; }
  Index size() const { return data_.rows(); }
  bool symmetric() const { return symmetric_; }
  double operator()(Index i, Index j) const { return data_(i, j); }

 private:
  DenseMatrix data_;
  bool symmetric_ = true;
};

/// Sparse LU factorization kept alive for repeated right-hand sides.
class SparseLu {
 public:
  /// Throws SingularMatrix (with the zero column index when reported) on failure.
  explicit SparseLu(const SparseMatrix& m);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;

  Vector solve(const Vector& rhs) const;
  Index size() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Index n_ = 0;
};

/// Direct solve with pivoting. Runs up to two steps of iterative refinement
/// and throws SingularMatrix if the relative residual stays above 1e-10.
Vector factor_solve(const SparseMatrix& a, const Vector& rhs);
Vector factor_solve(const DenseMatrix& a, const Vector& rhs);

struct EigenPair {
  double value = 0.0;
  Vector vector;
};

/// Algebraically smallest eigenpair of a symmetric matrix with
/// ||M v - lambda v|| <= tol * ||M||. A full symmetric eigendecomposition is
/// used up to @p dense_limit rows; above it, shifted inverse iteration with
/// inertia-checked shifts. Throws NoConvergence when iteration stalls.
EigenPair min_eigenvalue_sym(const DenseSymMatrix& m, double tol = 1e-10,
                             Index dense_limit = 2000);

}  // namespace mdfc::linalg
