#include "disc_internal.hpp"

#include "mdfc/errors.hpp"

#include <map>

namespace mdfc {

using linalg::DenseMatrix;
using linalg::Triplet;
using linalg::Vector;

namespace {

DenseMatrix local_stiffness(const SubdomainGrid& grid, int cell, double kappa) {
  const auto& cn = grid.cells[static_cast<size_t>(cell)];
  if (grid.dim == 1) {
    const double len = grid.cell_volumes[static_cast<size_t>(cell)];
    DenseMatrix k(2, 2);
    k << 1.0, -1.0, -1.0, 1.0;
    return (kappa / len) * k;
  }
  const double area = grid.cell_volumes[static_cast<size_t>(cell)];
  Point grad[3];
  for (int i = 0; i < 3; ++i) {
    const Point& pj = grid.nodes[static_cast<size_t>(cn[static_cast<size_t>((i + 1) % 3)])];
    const Point& pk = grid.nodes[static_cast<size_t>(cn[static_cast<size_t>((i + 2) % 3)])];
    grad[i] = Point(pj.y() - pk.y(), pk.x() - pj.x()) / (2.0 * area);
  }
  DenseMatrix k(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k(i, j) = kappa * area * grad[i].dot(grad[j]);
  return k;
}

}  // namespace

SubdomainOperator assemble_p1(const SubdomainGrid& grid, const SubdomainParams& params) {
  detail::require_simplicial(grid, "P1");
  detail::check_params(grid, params, true);
  const int nn = grid.num_nodes();
  const int nc = grid.num_cells();

  std::vector<int> dof(static_cast<size_t>(nn), -1), fixed_row(static_cast<size_t>(nn), -1);
  std::vector<double> fixed_value(static_cast<size_t>(nn), 0.0);
  int n = 0, nd = 0;
  SubdomainOperator op;
  for (int v = 0; v < nn; ++v) {
    const auto& d = grid.node_dirichlet[static_cast<size_t>(v)];
    if (d) {
      fixed_row[static_cast<size_t>(v)] = nd++;
      fixed_value[static_cast<size_t>(v)] = *d;
      op.reaction_points.push_back(grid.nodes[static_cast<size_t>(v)]);
    } else {
      dof[static_cast<size_t>(v)] = n++;
    }
  }
  op.kind = OperatorKind::P1;
  op.subdomain = grid.id;
  op.dim = grid.dim;
  op.has_dirichlet = nd > 0;
  op.boundary_load = Vector::Zero(n);
  op.reaction_offset = Vector::Zero(nd);
  op.mean_weights = Vector::Zero(n);

  std::vector<Triplet> a, s, react, react_src, cp;
  op.cell_pressure_offset = Vector::Zero(nc);
  for (int c = 0; c < nc; ++c) {
    const auto& cn = grid.cells[static_cast<size_t>(c)];
    const DenseMatrix k = local_stiffness(grid, c, params.kappa[static_cast<size_t>(c)]);
    const double share = 1.0 / static_cast<double>(cn.size());
    for (size_t i = 0; i < cn.size(); ++i) {
      const auto vi = static_cast<size_t>(cn[i]);
      if (dof[vi] >= 0) {
        s.emplace_back(dof[vi], c, share);
        cp.emplace_back(c, dof[vi], share);
        op.mean_weights(dof[vi]) += share * grid.cell_volumes[static_cast<size_t>(c)];
      } else {
        react_src.emplace_back(fixed_row[vi], c, share);
        op.cell_pressure_offset(c) += share * fixed_value[vi];
      }
      for (size_t j = 0; j < cn.size(); ++j) {
        const auto vj = static_cast<size_t>(cn[j]);
        const double kij = k(static_cast<linalg::Index>(i), static_cast<linalg::Index>(j));
        if (dof[vi] >= 0 && dof[vj] >= 0) a.emplace_back(dof[vi], dof[vj], kij);
        if (dof[vi] >= 0 && dof[vj] < 0) op.boundary_load(dof[vi]) -= kij * fixed_value[vj];
        if (dof[vi] < 0 && dof[vj] >= 0) react.emplace_back(fixed_row[vi], dof[vj], kij);
        if (dof[vi] < 0 && dof[vj] < 0) op.reaction_offset(fixed_row[vi]) += kij * fixed_value[vj];
      }
    }
  }

  // Exterior Neumann loads and the interface trace basis.
  std::map<int, int> trace_of_node;
  std::vector<Triplet> neumann, react_trace;
  for (int f = 0; f < grid.num_faces(); ++f) {
    if (!grid.is_boundary_face(f)) continue;
    const auto fu = static_cast<size_t>(f);
    const FaceTag& tag = grid.face_tags[fu];
    const auto& fnodes = grid.face_nodes[fu];
    if (tag.kind == BoundaryKind::NeumannExterior || tag.kind == BoundaryKind::Interior) {
      const double share = tag.value * grid.face_areas[fu] / static_cast<double>(fnodes.size());
      for (int v : fnodes) {
        if (dof[static_cast<size_t>(v)] >= 0)
          op.boundary_load(dof[static_cast<size_t>(v)]) -= share;
        else
          op.reaction_offset(fixed_row[static_cast<size_t>(v)]) += share;
      }
    } else if (tag.kind == BoundaryKind::Interface) {
      for (size_t k = 0; k < fnodes.size(); ++k) {
        const int v = fnodes[k];
        auto [it, inserted] = trace_of_node.try_emplace(v, op.num_trace());
        if (inserted) {
          BasisFunction bf;
          bf.dof = dof[static_cast<size_t>(v)];
          bf.fixed_value = bf.dof >= 0 ? 0.0 : fixed_value[static_cast<size_t>(v)];
          op.trace.functions.push_back(bf);
          if (bf.dof >= 0)
            neumann.emplace_back(bf.dof, it->second, 1.0);
          else
            react_trace.emplace_back(fixed_row[static_cast<size_t>(v)], it->second, 1.0);
        }
        BasisPiece piece{f, 1.0, 1.0};
        if (fnodes.size() == 2) {
          piece.v0 = k == 0 ? 1.0 : 0.0;
          piece.v1 = k == 1 ? 1.0 : 0.0;
        }
        op.trace.functions[static_cast<size_t>(it->second)].pieces.push_back(piece);
      }
    }
  }
  op.trace.num_dofs = n;

  if (grid.dim == 1) {
    op.pressure.num_dofs = n;
    for (int v = 0; v < nn; ++v) {
      BasisFunction bf;
      bf.dof = dof[static_cast<size_t>(v)];
      bf.fixed_value = bf.dof >= 0 ? 0.0 : fixed_value[static_cast<size_t>(v)];
      for (int c = 0; c < nc; ++c) {
        const auto& cn = grid.cells[static_cast<size_t>(c)];
        if (cn[0] == v || cn[1] == v) bf.pieces.push_back({c, cn[0] == v ? 1.0 : 0.0, cn[1] == v ? 1.0 : 0.0});
      }
      op.pressure.functions.push_back(std::move(bf));
    }
  }

  op.stiffness = linalg::from_triplets(n, n, a);
  op.source_injection = linalg::from_triplets(n, nc, s);
  op.neumann_injection = linalg::from_triplets(n, op.num_trace(), neumann);
  op.cell_pressure = linalg::from_triplets(nc, n, cp);
  op.reaction_matrix = linalg::from_triplets(nd, n, react);
  op.reaction_source = linalg::from_triplets(nd, nc, react_src);
  op.reaction_trace = linalg::from_triplets(nd, op.num_trace(), react_trace);
  return op;
}

namespace detail {

FluxReport p1_fluxes(const SubdomainGrid& grid, const SubdomainOperator& op, const Vector& x, const Vector& psi,
                     const Vector& theta) {
  FluxReport r;
  Vector react = op.reaction_matrix * x + op.reaction_offset;
  if (psi.size() > 0) react += op.reaction_source * psi;
  if (theta.size() > 0) react += op.reaction_trace * theta;
  for (linalg::Index i = 0; i < react.size(); ++i)
    r.boundary.push_back({op.reaction_points[static_cast<size_t>(i)], -react(i), true});
  for (int f = 0; f < grid.num_faces(); ++f) {
    if (!grid.is_boundary_face(f)) continue;
    const FaceTag& tag = grid.face_tags[static_cast<size_t>(f)];
    if (tag.kind == BoundaryKind::NeumannExterior)
      r.boundary.push_back({grid.face_centers[static_cast<size_t>(f)], tag.value * grid.face_areas[static_cast<size_t>(f)], false});
  }
  return r;
}

}  // namespace detail

}  // namespace mdfc
