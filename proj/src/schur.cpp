#include "assembly_internal.hpp"
#include "mdfc/errors.hpp"
#include "mdfc/parallel.hpp"

#include <string>

namespace mdfc {

using linalg::DenseMatrix;
using linalg::SparseMatrix;
using linalg::Vector;

namespace {

using ColMajor = Eigen::SparseMatrix<double, Eigen::ColMajor>;

std::vector<int> nonzero_columns(const ColMajor& u) {
  std::vector<int> cols;
  for (linalg::Index c = 0; c < u.outerSize(); ++c)
    if (ColMajor::InnerIterator(u, c)) cols.push_back(static_cast<int>(c));
  return cols;
}

}  // namespace

DenseMatrix SchurSystem::full_matrix() const {
  const auto nl = s.size();
  const auto na = augmentation.cols();
  DenseMatrix f = DenseMatrix::Zero(nl + na, nl + na);
  f.topLeftCorner(nl, nl) = s.matrix();
  f.topRightCorner(nl, na) = -augmentation;
  f.bottomLeftCorner(na, nl) = -augmentation.transpose();
  return f;
}

SchurSystem assemble_schur(const Discretization& d) {
  if (d.mesh == nullptr || d.operators.size() != static_cast<size_t>(d.mesh->size()) ||
      d.coupling.size() != d.operators.size())
    throw MissingOperator("an operator is required for every subdomain");
  if (d.projections.size() != d.mortars.size()) throw MissingProjection("a projection is required for every interface");
  const int n = d.mesh->size();
  const int nl = d.num_mortar();

  auto solvers = std::make_shared<std::vector<LocalSolver>>();
  {
    std::vector<std::unique_ptr<LocalSolver>> tmp(static_cast<size_t>(n));
    parallel_for(n, [&](int i) { tmp[static_cast<size_t>(i)] = std::make_unique<LocalSolver>(d.operators[static_cast<size_t>(i)]); });
    solvers->reserve(static_cast<size_t>(n));
    for (auto& s : tmp) solvers->push_back(std::move(*s));
  }

  std::vector<ColMajor> u(static_cast<size_t>(n));
  std::vector<std::vector<int>> cols(static_cast<size_t>(n));
  struct Task {
    int sub, col;
  };
  std::vector<Task> tasks;
  for (int i = 0; i < n; ++i) {
    u[static_cast<size_t>(i)] = ColMajor(d.coupling[static_cast<size_t>(i)]);
    cols[static_cast<size_t>(i)] = nonzero_columns(u[static_cast<size_t>(i)]);
    if (d.operators[static_cast<size_t>(i)].kind == OperatorKind::BLOCKING) continue;
    for (int c : cols[static_cast<size_t>(i)]) tasks.push_back({i, c});
  }

  // one local solve per mortar basis vector touching a subdomain
  std::vector<Vector> contrib(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), [&](int k) {
    const Task& tk = tasks[static_cast<size_t>(k)];
    const ColMajor& ui = u[static_cast<size_t>(tk.sub)];
    const Vector v = (*solvers)[static_cast<size_t>(tk.sub)].solve(Vector(ui.col(tk.col)));
    contrib[static_cast<size_t>(k)] = ui.transpose() * v;
  });

  DenseMatrix s = DenseMatrix::Zero(nl, nl);
  for (int k = 0; k < nl; ++k) s(k, k) = d.perp_mass(k);
  for (size_t k = 0; k < tasks.size(); ++k)
    for (int r : cols[static_cast<size_t>(tasks[k].sub)]) s(r, tasks[k].col) += contrib[k](r);

  SchurSystem out;
  out.kernel_offset.assign(static_cast<size_t>(n), -1);
  int na = 0;
  for (int i = 0; i < n; ++i) {
    const auto nz = (*solvers)[static_cast<size_t>(i)].kernel().cols();
    if (nz == 0) continue;
    out.kernel_offset[static_cast<size_t>(i)] = na;
    na += static_cast<int>(nz);
  }
  out.augmentation = DenseMatrix::Zero(nl, na);
  out.rhs = Vector::Zero(nl + na);
  out.rhs.head(nl) = d.mortar_rhs;
  for (int i = 0; i < n; ++i) {
    const LocalSolver& solver = (*solvers)[static_cast<size_t>(i)];
    const ColMajor& ui = u[static_cast<size_t>(i)];
    const Vector& data = d.data[static_cast<size_t>(i)];
    out.rhs.head(nl) += ui.transpose() * solver.solve(data);
    const int ko = out.kernel_offset[static_cast<size_t>(i)];
    if (ko < 0) continue;
    const DenseMatrix& z = solver.kernel();
    out.augmentation.middleCols(ko, z.cols()) = ui.transpose() * z;
    out.rhs.segment(nl + ko, z.cols()) = -(z.transpose() * data);
  }
  out.s = linalg::DenseSymMatrix(std::move(s));
  out.solvers = std::move(solvers);
  return out;
}

Solution solve_schur(const Discretization& d, const SchurSystem& schur) {
  if (!schur.solvers) throw MissingOperator("Schur system has no local solvers");
  const int n = d.mesh->size();
  const int nl = schur.num_mortar();
  Vector sol = Vector::Zero(schur.rhs.size());
  if (sol.size() > 0) {
    try {
      sol = linalg::factor_solve(schur.full_matrix(), schur.rhs);
    } catch (const SingularMatrix& e) {
      throw SingularSystem(std::string("Schur system is singular: ") + e.what());
    }
  }
  const Vector lambda = sol.head(nl);
  std::vector<Vector> dofs;
  std::vector<Vector> kc(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const LocalSolver& solver = (*schur.solvers)[static_cast<size_t>(i)];
    const Vector r = d.data[static_cast<size_t>(i)] - d.coupling[static_cast<size_t>(i)] * lambda;
    Vector x = solver.solve(r);
    const int ko = schur.kernel_offset[static_cast<size_t>(i)];
    if (ko >= 0) {
      const DenseMatrix& z = solver.kernel();
      kc[static_cast<size_t>(i)] = sol.segment(nl + ko, z.cols());
      x += z * kc[static_cast<size_t>(i)];
    }
    dofs.push_back(std::move(x));
  }
  Solution s = detail::make_solution(d, std::move(dofs), lambda);
  s.kernel_coefficients = std::move(kc);
  s.residual = sol.size() > 0 ? linalg::relative_residual(schur.full_matrix(), sol, schur.rhs) : 0.0;
  return s;
}

}  // namespace mdfc
