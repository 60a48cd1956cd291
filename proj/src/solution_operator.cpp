#include "mdfc/disc.hpp"
#include "mdfc/errors.hpp"

#include <cmath>
#include <string>

namespace mdfc {

using linalg::DenseMatrix;
using linalg::SparseMatrix;
using linalg::Triplet;
using linalg::Vector;

struct LocalSolver::Impl {
  enum class Mode { Direct, Bordered, Zero } mode = Mode::Zero;
  SparseMatrix matrix;
  std::unique_ptr<linalg::SparseLu> lu;
  linalg::Index n = 0;
};

LocalSolver::LocalSolver(const SubdomainOperator& op) : impl_(std::make_unique<Impl>()) {
  const auto n = static_cast<linalg::Index>(op.num_dofs());
  impl_->n = n;
  if (op.kind == OperatorKind::BLOCKING) {
    impl_->mode = Impl::Mode::Zero;
    kernel_ = DenseMatrix::Identity(n, n);
    return;
  }
  if (op.has_dirichlet) {
    impl_->mode = Impl::Mode::Direct;
    impl_->matrix = op.stiffness;
    kernel_ = DenseMatrix(n, 0);
  } else {
    impl_->mode = Impl::Mode::Bordered;
    std::vector<Triplet> t;
    for (linalg::Index r = 0; r < op.stiffness.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(op.stiffness, r); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    for (linalg::Index i = 0; i < n; ++i)
      if (op.mean_weights(i) != 0.0) {
        t.emplace_back(i, n, op.mean_weights(i));
        t.emplace_back(n, i, op.mean_weights(i));
      }
    impl_->matrix = linalg::from_triplets(n + 1, n + 1, t);
    kernel_ = DenseMatrix::Ones(n, 1);
  }
  try {
    impl_->lu = std::make_unique<linalg::SparseLu>(impl_->matrix);
  } catch (const SingularMatrix& e) {
    throw SingularSystem("local operator of subdomain " + std::to_string(op.subdomain) + " is singular: " + e.what());
  }
}

LocalSolver::~LocalSolver() = default;
LocalSolver::LocalSolver(LocalSolver&&) noexcept = default;
LocalSolver& LocalSolver::operator=(LocalSolver&&) noexcept = default;

Vector LocalSolver::solve(const Vector& rhs) const {
  const Impl& s = *impl_;
  if (s.mode == Impl::Mode::Zero) return Vector::Zero(s.n);
  Vector b = rhs;
  if (s.mode == Impl::Mode::Bordered) {
    b.conservativeResize(s.n + 1);
    b(s.n) = 0.0;
  }
  Vector x = s.lu->solve(b);
  for (int step = 0; step < 2; ++step) {
    const Vector r = b - s.matrix * x;
    if (r.norm() <= 1e-15 * (b.norm() + 1e-300)) break;
    x += s.lu->solve(r);
  }
  if (!x.allFinite()) throw SingularSystem("local solve produced non-finite values");
  return s.mode == Impl::Mode::Bordered ? Vector(x.head(s.n)) : x;
}

LocalSolution apply_solution_operator(const SubdomainOperator& op, const Vector& psi, const Vector& theta) {
  const LocalSolver solver(op);
  return apply_solution_operator(op, solver, psi, theta);
}

LocalSolution apply_solution_operator(const SubdomainOperator& op, const LocalSolver& solver, const Vector& psi,
                                      const Vector& theta) {
  const Vector rhs = op.load(psi, theta);
  if (!op.has_dirichlet) {
    double scale = rhs.cwiseAbs().sum();
    if (psi.size() > 0) scale += psi.cwiseAbs().sum();
    if (theta.size() > 0) scale += theta.cwiseAbs().sum();
    const double tol = 1e-9 * std::max(scale, 1e-300);
    const Vector imbalance = solver.kernel().transpose() * rhs;
    if (imbalance.size() > 0 && imbalance.cwiseAbs().maxCoeff() > tol)
      throw IncompatibleData("loads of pure-Neumann subdomain " + std::to_string(op.subdomain) +
                             " do not balance (imbalance " + std::to_string(imbalance.cwiseAbs().maxCoeff()) + ")");
  }
  LocalSolution out;
  out.p = solver.solve(rhs);
  out.t = op.trace_values(out.p);
  return out;
}

}  // namespace mdfc
