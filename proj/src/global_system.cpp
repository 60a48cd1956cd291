#include "assembly_internal.hpp"
#include "mdfc/errors.hpp"

#include <string>

namespace mdfc {

using linalg::SparseMatrix;
using linalg::Triplet;
using linalg::Vector;

namespace detail {

Solution make_solution(const Discretization& d, std::vector<Vector> dofs, Vector lambda) {
  Solution s;
  const int n = d.mesh->size();
  s.dofs = std::move(dofs);
  s.lambda_stacked = std::move(lambda);
  s.cell_pressure.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    s.cell_pressure[static_cast<size_t>(i)] = d.operators[static_cast<size_t>(i)].cell_pressures(s.dofs[static_cast<size_t>(i)]);
  for (const MortarInterface& m : d.mortars) {
    const ProjectionPair& pp = d.projections[static_cast<size_t>(m.id)];
    s.lambda.push_back(s.lambda_stacked.segment(d.mortar_offset[static_cast<size_t>(m.id)], m.num_cells()));
    s.trace.push_back(pp.project_trace(s.dofs[static_cast<size_t>(m.higher)]));
    s.lower_pressure.push_back(pp.project_pressure(s.dofs[static_cast<size_t>(m.lower)]));
  }
  s.kernel_coefficients.assign(static_cast<size_t>(n), Vector());
  return s;
}

}  // namespace detail

BlockSystem assemble_global_system(const Discretization& d) {
  if (d.mesh == nullptr || d.operators.size() != static_cast<size_t>(d.mesh->size()) ||
      d.coupling.size() != d.operators.size())
    throw MissingOperator("an operator is required for every subdomain");
  if (d.projections.size() != d.mortars.size()) throw MissingProjection("a projection is required for every interface");

  const Partition& part = d.partition;
  BlockSystem sys;
  const int n = d.mesh->size();
  sys.subdomain_offset.assign(static_cast<size_t>(n), -1);
  sys.interface_offset.assign(d.mortars.size(), -1);

  int pos = 0;
  for (int i : part.flowing) {
    sys.subdomain_offset[static_cast<size_t>(i)] = pos;
    pos += d.operators[static_cast<size_t>(i)].num_dofs();
  }
  sys.block_size[0] = pos;
  for (int pass = 0; pass < 2; ++pass) {
    const int start = pos;
    for (const MortarInterface& m : d.mortars)
      if (part.is_blocking(m.lower) == (pass == 1)) {
        sys.interface_offset[static_cast<size_t>(m.id)] = pos;
        pos += m.num_cells();
      }
    sys.block_size[static_cast<size_t>(1 + pass)] = pos - start;
  }
  const int start_b = pos;
  for (int i : part.blocking) {
    sys.subdomain_offset[static_cast<size_t>(i)] = pos;
    pos += d.operators[static_cast<size_t>(i)].num_dofs();
  }
  sys.block_size[3] = pos - start_b;

  // stacked mortar index -> global row
  std::vector<int> mortar_row(static_cast<size_t>(d.num_mortar()));
  for (const MortarInterface& m : d.mortars)
    for (int k = 0; k < m.num_cells(); ++k)
      mortar_row[static_cast<size_t>(d.mortar_offset[static_cast<size_t>(m.id)] + k)] =
          sys.interface_offset[static_cast<size_t>(m.id)] + k;

  std::vector<Triplet> t;
  sys.rhs = Vector::Zero(pos);
  for (int i = 0; i < n; ++i) {
    const int off = sys.subdomain_offset[static_cast<size_t>(i)];
    const SubdomainOperator& op = d.operators[static_cast<size_t>(i)];
    for (linalg::Index r = 0; r < op.stiffness.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(op.stiffness, r); it; ++it)
        t.emplace_back(off + it.row(), off + it.col(), it.value());
    const SparseMatrix& u = d.coupling[static_cast<size_t>(i)];
    for (linalg::Index r = 0; r < u.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(u, r); it; ++it) {
        const int g = mortar_row[static_cast<size_t>(it.col())];
        t.emplace_back(off + it.row(), g, it.value());
        t.emplace_back(g, off + it.row(), -it.value());
      }
    sys.rhs.segment(off, op.num_dofs()) = d.data[static_cast<size_t>(i)];
  }
  for (int k = 0; k < d.num_mortar(); ++k) {
    const int g = mortar_row[static_cast<size_t>(k)];
    t.emplace_back(g, g, d.perp_mass(k));
    sys.rhs(g) = d.mortar_rhs(k);
  }
  sys.matrix = linalg::from_triplets(pos, pos, t);
  return sys;
}

Solution solve_global(const Discretization& d, const BlockSystem& sys) {
  bool any_dirichlet = false;
  for (const SubdomainOperator& op : d.operators) any_dirichlet = any_dirichlet || op.has_dirichlet;
  if (!any_dirichlet) throw SingularSystem("no subdomain has Dirichlet data; the pressure level is undetermined");
  Vector x;
  try {
    x = linalg::factor_solve(sys.matrix, sys.rhs);
  } catch (const SingularMatrix& e) {
    throw SingularSystem(std::string("global system is singular: ") + e.what());
  }
  std::vector<Vector> dofs;
  for (int i = 0; i < d.mesh->size(); ++i)
    dofs.push_back(x.segment(sys.subdomain_offset[static_cast<size_t>(i)], d.operators[static_cast<size_t>(i)].num_dofs()));
  Vector lambda(d.num_mortar());
  for (const MortarInterface& m : d.mortars)
    lambda.segment(d.mortar_offset[static_cast<size_t>(m.id)], m.num_cells()) =
        x.segment(sys.interface_offset[static_cast<size_t>(m.id)], m.num_cells());
  Solution s = detail::make_solution(d, std::move(dofs), std::move(lambda));
  s.residual = linalg::relative_residual(sys.matrix, x, sys.rhs);
  return s;
}

Solution solve_global(const Discretization& d) { return solve_global(d, assemble_global_system(d)); }

}  // namespace mdfc
