#include "disc_internal.hpp"

#include "mdfc/errors.hpp"

#include <string>

namespace mdfc {

using linalg::Triplet;
using linalg::Vector;

SubdomainOperator assemble_tpfa(const SubdomainGrid& grid, const SubdomainParams& params) {
  if (grid.dim < 1) throw std::invalid_argument("TPFA needs a 1D or 2D grid");
  detail::check_params(grid, params, true);
  const int nc = grid.num_cells();
  const int nf = grid.num_faces();

  std::vector<int> face_dof(static_cast<size_t>(nf), -1);
  int n = nc;
  for (int f = 0; f < nf; ++f)
    if (grid.face_tags[static_cast<size_t>(f)].kind == BoundaryKind::Interface) face_dof[static_cast<size_t>(f)] = n++;

  SubdomainOperator op;
  op.kind = OperatorKind::TPFA;
  op.subdomain = grid.id;
  op.dim = grid.dim;
  op.boundary_load = Vector::Zero(n);
  std::vector<Triplet> a;
  std::vector<Triplet> neumann;

  for (int f = 0; f < nf; ++f) {
    const auto fu = static_cast<size_t>(f);
    const int c0 = grid.face_cells[fu][0];
    const double t0 = detail::half_transmissibility(grid, c0, f, params.kappa[static_cast<size_t>(c0)]);
    if (!grid.is_boundary_face(f)) {
      const int c1 = grid.face_cells[fu][1];
      const double t1 = detail::half_transmissibility(grid, c1, f, params.kappa[static_cast<size_t>(c1)]);
      const double t = t0 * t1 / (t0 + t1);
      a.emplace_back(c0, c0, t);
      a.emplace_back(c1, c1, t);
      a.emplace_back(c0, c1, -t);
      a.emplace_back(c1, c0, -t);
      continue;
    }
    const FaceTag& tag = grid.face_tags[fu];
    switch (tag.kind) {
      case BoundaryKind::Dirichlet:
        a.emplace_back(c0, c0, t0);
        op.boundary_load(c0) += t0 * tag.value;
        op.has_dirichlet = true;
        break;
      case BoundaryKind::NeumannExterior:
      case BoundaryKind::Interior:
        op.boundary_load(c0) -= tag.value * grid.face_areas[fu];
        break;
      case BoundaryKind::Interface: {
        const int d = face_dof[fu];
        a.emplace_back(c0, c0, t0);
        a.emplace_back(d, d, t0);
        a.emplace_back(c0, d, -t0);
        a.emplace_back(d, c0, -t0);
        const int b = static_cast<int>(op.trace.functions.size());
        op.trace.functions.push_back({d, 0.0, {{f, 1.0, 1.0}}});
        neumann.emplace_back(d, b, 1.0);
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

FluxReport tpfa_fluxes(const SubdomainGrid& grid, const SubdomainParams& params, const SubdomainOperator& op,
                       const Vector& x) {
  const int nc = grid.num_cells();
  FluxReport r;
  r.cell_face_flux.resize(static_cast<size_t>(nc));
  for (int c = 0; c < nc; ++c) r.cell_face_flux[static_cast<size_t>(c)].assign(grid.cell_faces[static_cast<size_t>(c)].size(), 0.0);

  // face -> interface dof
  std::vector<int> face_dof(static_cast<size_t>(grid.num_faces()), -1);
  for (const BasisFunction& b : op.trace.functions) face_dof[static_cast<size_t>(b.pieces.front().entity)] = b.dof;

  std::vector<double> face_flux(static_cast<size_t>(grid.num_faces()), 0.0);  // outward from face_cells[f][0]
  for (int f = 0; f < grid.num_faces(); ++f) {
    const auto fu = static_cast<size_t>(f);
    const int c0 = grid.face_cells[fu][0];
    const double t0 = half_transmissibility(grid, c0, f, params.kappa[static_cast<size_t>(c0)]);
    if (!grid.is_boundary_face(f)) {
      const int c1 = grid.face_cells[fu][1];
      const double t1 = half_transmissibility(grid, c1, f, params.kappa[static_cast<size_t>(c1)]);
      face_flux[fu] = t0 * t1 / (t0 + t1) * (x(c0) - x(c1));
      continue;
    }
    const FaceTag& tag = grid.face_tags[fu];
    switch (tag.kind) {
      case BoundaryKind::Dirichlet:
        face_flux[fu] = t0 * (x(c0) - tag.value);
        r.boundary.push_back({grid.face_centers[fu], face_flux[fu], true});
        break;
      case BoundaryKind::NeumannExterior:
      case BoundaryKind::Interior:
        face_flux[fu] = tag.value * grid.face_areas[fu];
        r.boundary.push_back({grid.face_centers[fu], face_flux[fu], false});
        break;
      case BoundaryKind::Interface:
        face_flux[fu] = t0 * (x(c0) - x(face_dof[fu]));
        break;
    }
  }
  for (int c = 0; c < nc; ++c) {
    const auto& faces = grid.cell_faces[static_cast<size_t>(c)];
    for (size_t k = 0; k < faces.size(); ++k) {
      const auto fu = static_cast<size_t>(faces[k]);
      r.cell_face_flux[static_cast<size_t>(c)][k] = grid.face_cells[fu][0] == c ? face_flux[fu] : -face_flux[fu];
    }
  }
  return r;
}

}  // namespace detail

}  // namespace mdfc
