#include "disc_internal.hpp"

#include "mdfc/errors.hpp"

#include <string>

namespace mdfc {

using linalg::DenseMatrix;
using linalg::Triplet;
using linalg::Vector;

namespace detail {

DenseMatrix rt0_inverse_mass(const SubdomainGrid& grid, int cell, double kappa) {
  const auto& cn = grid.cells[static_cast<size_t>(cell)];
  if (grid.dim == 1) {
    const double len = grid.cell_volumes[static_cast<size_t>(cell)];
    DenseMatrix w(2, 2);
    w << 2.0, 1.0, 1.0, 2.0;
    return (2.0 * kappa / len) * w;
  }
  const double area = grid.cell_volumes[static_cast<size_t>(cell)];
  Point v[3], mid[3];
  for (int k = 0; k < 3; ++k) {
    v[k] = grid.nodes[static_cast<size_t>(cn[static_cast<size_t>((k + 2) % 3)])];
    mid[k] = 0.5 * (grid.nodes[static_cast<size_t>(cn[static_cast<size_t>(k)])] +
                    grid.nodes[static_cast<size_t>(cn[static_cast<size_t>((k + 1) % 3)])]);
  }
  DenseMatrix m = DenseMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (const Point& q : mid) s += (q - v[i]).dot(q - v[j]);
      m(i, j) = s * (area / 3.0) / (4.0 * area * area * kappa);
    }
  return m.inverse();
}

}  // namespace detail

SubdomainOperator assemble_rt0h(const SubdomainGrid& grid, const SubdomainParams& params) {
  detail::require_simplicial(grid, "RT0H");
  detail::check_params(grid, params, true);
  const int nc = grid.num_cells();
  const int nf = grid.num_faces();

  std::vector<int> face_dof(static_cast<size_t>(nf), -1);
  int n = nc;
  for (int f = 0; f < nf; ++f)
    if (!(grid.is_boundary_face(f) && grid.face_tags[static_cast<size_t>(f)].kind == BoundaryKind::Dirichlet))
      face_dof[static_cast<size_t>(f)] = n++;

  SubdomainOperator op;
  op.kind = OperatorKind::RT0H;
  op.subdomain = grid.id;
  op.dim = grid.dim;
  op.boundary_load = Vector::Zero(n);
  std::vector<Triplet> a;

  for (int c = 0; c < nc; ++c) {
    const auto& faces = grid.cell_faces[static_cast<size_t>(c)];
    const auto nl = static_cast<linalg::Index>(faces.size());
    const DenseMatrix w = detail::rt0_inverse_mass(grid, c, params.kappa[static_cast<size_t>(c)]);
    // local unknowns: cell pressure then face pressures; C = [1, -I]
    DenseMatrix c_mat = DenseMatrix::Zero(nl, nl + 1);
    c_mat.col(0).setOnes();
    c_mat.rightCols(nl) = -DenseMatrix::Identity(nl, nl);
    const DenseMatrix local = c_mat.transpose() * w * c_mat;

    std::vector<int> idx(static_cast<size_t>(nl) + 1);
    std::vector<double> fixed(static_cast<size_t>(nl) + 1, 0.0);
    idx[0] = c;
    for (linalg::Index k = 0; k < nl; ++k) {
      const auto fu = static_cast<size_t>(faces[static_cast<size_t>(k)]);
      idx[static_cast<size_t>(k) + 1] = face_dof[fu];
      if (face_dof[fu] < 0) fixed[static_cast<size_t>(k) + 1] = grid.face_tags[fu].value;
    }
    for (size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] < 0) continue;
      for (size_t j = 0; j < idx.size(); ++j) {
        const double v = local(static_cast<linalg::Index>(i), static_cast<linalg::Index>(j));
        if (idx[j] >= 0)
          a.emplace_back(idx[i], idx[j], v);
        else
          op.boundary_load(idx[i]) -= v * fixed[j];
      }
    }
  }

  std::vector<Triplet> neumann;
  for (int f = 0; f < nf; ++f) {
    if (!grid.is_boundary_face(f)) continue;
    const auto fu = static_cast<size_t>(f);
    const FaceTag& tag = grid.face_tags[fu];
    switch (tag.kind) {
      case BoundaryKind::Dirichlet:
        op.has_dirichlet = true;
        break;
      case BoundaryKind::NeumannExterior:
      case BoundaryKind::Interior:
        op.boundary_load(face_dof[fu]) -= tag.value * grid.face_areas[fu];
        break;
      case BoundaryKind::Interface: {
        const int b = static_cast<int>(op.trace.functions.size());
        op.trace.functions.push_back({face_dof[fu], 0.0, {{f, 1.0, 1.0}}});
        neumann.emplace_back(face_dof[fu], b, 1.0);
        break;
      }
    }
  }
  op.stiffness = linalg::from_triplets(n, n, a);
  op.trace.num_dofs = n;
  op.neumann_injection = linalg::from_triplets(n, op.num_trace(), neumann);

  std::vector<Triplet> s, cp;
  op.pressure.num_dofs = n;
  for (int c = 0; c < nc; ++c) {
    s.emplace_back(c, c, 1.0);
    cp.emplace_back(c, c, 1.0);
    op.pressure.functions.push_back({c, 0.0, {{c, 1.0, 1.0}}});
  }
  op.source_injection = linalg::from_triplets(n, nc, s);
  op.cell_pressure = linalg::from_triplets(nc, n, cp);
  op.cell_pressure_offset = Vector::Zero(nc);
  op.mean_weights = Vector::Zero(n);
  for (int c = 0; c < nc; ++c) op.mean_weights(c) = grid.cell_volumes[static_cast<size_t>(c)];
  return op;
}

namespace detail {

FluxReport rt0h_fluxes(const SubdomainGrid& grid, const SubdomainParams& params, const SubdomainOperator& op,
                       const Vector& x) {
  (void)op;
  const int nc = grid.num_cells();
  std::vector<int> face_dof(static_cast<size_t>(grid.num_faces()), -1);
  int n = nc;
  for (int f = 0; f < grid.num_faces(); ++f)
    if (!(grid.is_boundary_face(f) && grid.face_tags[static_cast<size_t>(f)].kind == BoundaryKind::Dirichlet))
      face_dof[static_cast<size_t>(f)] = n++;

  FluxReport r;
  r.cell_face_flux.resize(static_cast<size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    const auto& faces = grid.cell_faces[static_cast<size_t>(c)];
    const DenseMatrix w = rt0_inverse_mass(grid, c, params.kappa[static_cast<size_t>(c)]);
    Vector jump(static_cast<linalg::Index>(faces.size()));
    for (size_t k = 0; k < faces.size(); ++k) {
      const auto fu = static_cast<size_t>(faces[k]);
      const double pi = face_dof[fu] >= 0 ? x(face_dof[fu]) : grid.face_tags[fu].value;
      jump(static_cast<linalg::Index>(k)) = x(c) - pi;
    }
    const Vector u = w * jump;
    r.cell_face_flux[static_cast<size_t>(c)].assign(u.data(), u.data() + u.size());
    for (size_t k = 0; k < faces.size(); ++k) {
      const int f = faces[k];
      if (!grid.is_boundary_face(f)) continue;
      const FaceTag& tag = grid.face_tags[static_cast<size_t>(f)];
      if (tag.kind == BoundaryKind::Interface) continue;
      r.boundary.push_back({grid.face_centers[static_cast<size_t>(f)], u(static_cast<linalg::Index>(k)),
                            tag.kind == BoundaryKind::Dirichlet});
    }
  }
  return r;
}

}  // namespace detail

}  // namespace mdfc
