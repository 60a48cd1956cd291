#include "mdfc/linalg.hpp"

#include "mdfc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>
#include <stdexcept>
#include <string>

namespace mdfc::linalg {

namespace {

constexpr double kResidualTol = 1e-10;

using ColMajor = Eigen::SparseMatrix<double, Eigen::ColMajor>;

long trailing_integer(const std::string& msg) {
  std::smatch match;
  static const std::regex digits(R"((\d+)\s*$)");
  if (std::regex_search(msg, match, digits)) return std::stol(match[1]);
  return -1;
}

}  // namespace

SparseMatrix from_triplets(Index rows, Index cols, const std::vector<Triplet>& entries) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  return m;
}

double max_abs(const SparseMatrix& m) {
  double best = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

double max_abs(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b) {
  const double denom = a.norm() * x.norm() + b.norm();
  const double num = (a * x - b).norm();
  return denom > 0.0 ? num / denom : num;
}

double relative_residual(const DenseMatrix& a, const Vector& x, const Vector& b) {
  const double denom = a.norm() * x.norm() + b.norm();
  const double num = (a * x - b).norm();
  return denom > 0.0 ? num / denom : num;
}

DenseSymMatrix::DenseSymMatrix(DenseMatrix m, bool symmetric) : data_(std::move(m)), symmetric_(symmetric) {
  if (data_.rows() != data_.cols()) throw std::invalid_argument("DenseSymMatrix: matrix is not square");
  if (symmetric_ && data_.size() > 0) {
    const double scale = max_abs(data_);
    const double asym = (data_ - data_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(scale, std::numeric_limits<double>::min()))
      throw std::invalid_argument("DenseSymMatrix: asymmetry " + std::to_string(asym) +
                                  " exceeds 1e-12 relative");
    data_ = 0.5 * (data_ + data_.transpose()).eval();
  }
}

struct SparseLu::Impl {
  Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>> lu;
};

SparseLu::SparseLu(const SparseMatrix& m) : impl_(std::make_unique<Impl>()), n_(m.rows()) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SparseLu: matrix is not square");
  if (n_ == 0) return;
  ColMajor cm = m;
  cm.makeCompressed();
  impl_->lu.analyzePattern(cm);
  impl_->lu.factorize(cm);
  if (impl_->lu.info() != Eigen::Success) {
    const std::string msg = impl_->lu.lastErrorMessage();
    throw SingularMatrix(trailing_integer(msg), "sparse LU failed: " + msg);
  }
}

SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

Vector SparseLu::solve(const Vector& rhs) const {
  if (n_ == 0) return Vector();
  Vector x = impl_->lu.solve(rhs);
  return x;
}

Vector factor_solve(const SparseMatrix& a, const Vector& rhs) {
  if (a.rows() != a.cols() || a.rows() != rhs.size())
    throw std::invalid_argument("factor_solve: dimension mismatch");
  if (a.rows() == 0) return Vector();
  SparseLu lu(a);
  Vector x = lu.solve(rhs);
  for (int step = 0; step < 2 && relative_residual(a, x, rhs) > 1e-14; ++step) x += lu.solve(rhs - a * x);
  if (!x.allFinite() || relative_residual(a, x, rhs) > kResidualTol)
    throw SingularMatrix(-1, "sparse solve residual above tolerance; matrix is numerically singular");
  return x;
}

Vector factor_solve(const DenseMatrix& a, const Vector& rhs) {
  if (a.rows() != a.cols() || a.rows() != rhs.size())
    throw std::invalid_argument("factor_solve: dimension mismatch");
  if (a.rows() == 0) return Vector();
  Eigen::PartialPivLU<DenseMatrix> lu(a);
  const DenseMatrix& lu_mat = lu.matrixLU();
  const double scale = std::max(lu_mat.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const double tiny = scale * std::numeric_limits<double>::epsilon() * static_cast<double>(a.rows());
  for (Index i = 0; i < lu_mat.rows(); ++i)
    if (std::abs(lu_mat(i, i)) <= tiny)
      throw SingularMatrix(static_cast<long>(i), "dense LU: zero pivot at " + std::to_string(i));
  Vector x = lu.solve(rhs);
  for (int step = 0; step < 2 && relative_residual(a, x, rhs) > 1e-14; ++step) x += lu.solve(rhs - a * x);
  if (!x.allFinite() || relative_residual(a, x, rhs) > kResidualTol)
    throw SingularMatrix(-1, "dense solve residual above tolerance; matrix is numerically singular");
  return x;
}

namespace {

// Number of negative pivots of LDL^T(m - shift I), i.e. eigenvalues below shift.
Index count_below(const DenseMatrix& m, double shift) {
  DenseMatrix shifted = m;
  shifted.diagonal().array() -= shift;
  Eigen::LDLT<DenseMatrix> ldlt(shifted);
  const Vector d = ldlt.vectorD();
  return (d.array() <= 0.0).count();
}

EigenPair inverse_iteration(const DenseMatrix& m, double tol) {
  const Index n = m.rows();
  const double norm = std::max(m.norm(), std::numeric_limits<double>::min());
  // Gershgorin lower bound, pushed slightly down so the shifted matrix is definite.
  double shift = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    const double radius = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
    shift = std::min(shift, m(i, i) - radius);
  }
  shift -= 1e-3 * norm;

  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  // deterministic perturbation so v is not orthogonal to the target
  for (Index i = 0; i < n; ++i) v(i) += 1e-3 * std::sin(1.0 + static_cast<double>(i));
  v.normalize();

  constexpr int kMaxIterations = 5000;
  auto factor = [&](double s) {
    DenseMatrix shifted = m;
    shifted.diagonal().array() -= s;
    return Eigen::LLT<DenseMatrix>(shifted);
  };
  Eigen::LLT<DenseMatrix> llt = factor(shift);
  double theta = v.dot(m * v);
  for (int it = 1; it <= kMaxIterations; ++it) {
    v = llt.solve(v);
    v.normalize();
    theta = v.dot(m * v);
    if ((m * v - theta * v).norm() <= tol * norm) return {theta, v};
    if (it % 5 == 0) {
      // Move the shift halfway towards the Rayleigh quotient if it provably
      // stays below the smallest eigenvalue.
      const double candidate = shift + 0.5 * (theta - shift);
      if (candidate > shift && count_below(m, candidate) == 0) {
        Eigen::LLT<DenseMatrix> trial = factor(candidate);
        if (trial.info() == Eigen::Success) {
          shift = candidate;
          llt = std::move(trial);
        }
      }
    }
  }
  throw NoConvergence(kMaxIterations, "shifted inverse iteration did not converge");
}

}  // namespace

EigenPair min_eigenvalue_sym(const DenseSymMatrix& m, double tol, Index dense_limit) {
  if (!m.symmetric()) throw std::invalid_argument("min_eigenvalue_sym: matrix not flagged symmetric");
  const Index n = m.size();
  if (n == 0) throw std::invalid_argument("min_eigenvalue_sym: empty matrix");
  if (n <= dense_limit) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m.matrix());
    if (solver.info() != Eigen::Success) throw NoConvergence(0, "symmetric eigensolver failed");
    return {solver.eigenvalues()(0), solver.eigenvectors().col(0)};
  }
  return inverse_iteration(m.matrix(), tol);
}

}  // namespace mdfc::linalg
