#include "mdfc/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdfc {

using linalg::SparseMatrix;
using linalg::Vector;

namespace {

Vector param_source(const Discretization& d, int i) {
  const auto& src = d.setup.params[static_cast<size_t>(i)].source;
  Vector psi = Vector::Zero(d.mesh->subdomain(i).num_cells());
  for (size_t c = 0; c < src.size(); ++c) psi(static_cast<linalg::Index>(c)) = src[c];
  return psi;
}

/// Integrated mortar sink per pressure function (or partition cell) of subdomain i.
Vector mortar_sink(const Discretization& d, const Solution& s, int i) {
  const SubdomainOperator& op = d.operators[static_cast<size_t>(i)];
  Vector sink;
  for (const MortarInterface& m : d.mortars) {
    if (m.lower != i) continue;
    const Vector part = -(d.projections[static_cast<size_t>(m.id)].lower_overlap.transpose() * s.lambda[static_cast<size_t>(m.id)]);
    if (sink.size() == 0) sink = Vector::Zero(part.size());
    sink += part;
  }
  if (sink.size() == 0)
    sink = Vector::Zero(op.pressure.on_mortar ? op.num_dofs() : static_cast<linalg::Index>(op.pressure.functions.size()));
  return sink;
}

/// Trace fluxes per trace function of subdomain i.
Vector trace_flux(const Discretization& d, const Solution& s, int i) {
  Vector theta = Vector::Zero(d.operators[static_cast<size_t>(i)].num_trace());
  for (const MortarInterface& m : d.mortars)
    if (m.higher == i)
      theta += d.projections[static_cast<size_t>(m.id)].higher_overlap.transpose() * s.lambda[static_cast<size_t>(m.id)];
  return theta;
}

FluxReport subdomain_fluxes(const Discretization& d, const Solution& s, int i) {
  const SubdomainGrid& g = d.mesh->subdomain(i);
  const SubdomainOperator& op = d.operators[static_cast<size_t>(i)];
  FluxReport r = recover_fluxes(g, d.setup.params[static_cast<size_t>(i)], op, s.dofs[static_cast<size_t>(i)],
                                param_source(d, i), trace_flux(d, s, i));
  if (op.kind == OperatorKind::P1 && !op.reaction_points.empty()) {
    // mortar sinks carried by Dirichlet-fixed pressure functions
    const Vector sink = mortar_sink(d, s, i);
    for (size_t f = 0; f < op.pressure.functions.size(); ++f) {
      const BasisFunction& bf = op.pressure.functions[f];
      if (bf.dof >= 0 || sink(static_cast<linalg::Index>(f)) == 0.0 || bf.pieces.empty()) continue;
      const BasisPiece& pc = bf.pieces.front();
      const auto& cell = g.cells[static_cast<size_t>(pc.entity)];
      const Point p = g.nodes[static_cast<size_t>(pc.v0 >= pc.v1 ? cell[0] : cell[1])];
      BoundaryFlux* best = nullptr;
      double dist = std::numeric_limits<double>::infinity();
      for (BoundaryFlux& b : r.boundary)
        if (b.dirichlet && (b.where - p).norm() < dist) {
          dist = (b.where - p).norm();
          best = &b;
        }
      if (best != nullptr) best->flux -= sink(static_cast<linalg::Index>(f));
    }
  }
  return r;
}

}  // namespace

Diagnostics compute_diagnostics(const Discretization& d, const Solution& s) {
  Diagnostics out;
  const int n = d.mesh->size();
  double scale = 0.0;
  for (const MortarInterface& m : d.mortars)
    for (int k = 0; k < m.num_cells(); ++k)
      scale = std::max(scale, std::abs(s.lambda[static_cast<size_t>(m.id)](k)) * m.measures[static_cast<size_t>(k)]);

  out.cell_imbalance.resize(static_cast<size_t>(n));
  double outward = 0.0;
  for (int i = 0; i < n; ++i) {
    const SubdomainGrid& g = d.mesh->subdomain(i);
    const SubdomainOperator& op = d.operators[static_cast<size_t>(i)];
    const Vector psi = param_source(d, i);
    out.total_sink += psi.sum();
    scale = std::max(scale, psi.size() > 0 ? psi.cwiseAbs().maxCoeff() : 0.0);

    const FluxReport r = subdomain_fluxes(d, s, i);
    for (const BoundaryFlux& b : r.boundary) {
      outward += b.flux;
      if (b.flux > 0.0)
        out.boundary_outflow += b.flux;
      else
        out.boundary_inflow -= b.flux;
      scale = std::max(scale, std::abs(b.flux));
    }
    for (const auto& faces : r.cell_face_flux)
      for (double q : faces) scale = std::max(scale, std::abs(q));

    auto& imb = out.cell_imbalance[static_cast<size_t>(i)];
    if (op.kind == OperatorKind::P1) continue;
    const Vector sink = mortar_sink(d, s, i);
    if (op.kind == OperatorKind::BLOCKING) {
      const Vector total = op.source_injection * psi + sink;
      imb.assign(total.data(), total.data() + total.size());
      continue;
    }
    imb.assign(static_cast<size_t>(g.num_cells()), 0.0);
    for (int c = 0; c < g.num_cells(); ++c) {
      imb[static_cast<size_t>(c)] = psi(c);
      if (c < static_cast<int>(r.cell_face_flux.size()))
        for (double q : r.cell_face_flux[static_cast<size_t>(c)]) imb[static_cast<size_t>(c)] += q;
    }
    for (size_t f = 0; f < op.pressure.functions.size(); ++f)
      for (const BasisPiece& pc : op.pressure.functions[f].pieces)
        if (pc.entity >= 0 && pc.entity < g.num_cells()) imb[static_cast<size_t>(pc.entity)] += sink(static_cast<linalg::Index>(f));
  }
  out.flux_scale = std::max(scale, std::numeric_limits<double>::min());
  for (const auto& imb : out.cell_imbalance)
    for (double v : imb) out.max_cell_imbalance = std::max(out.max_cell_imbalance, std::abs(v));
  out.global_imbalance = outward + out.total_sink;

  for (const MortarInterface& m : d.mortars) {
    const double kp = d.setup.kappa_perp[static_cast<size_t>(m.id)];
    const Vector& lam = s.lambda[static_cast<size_t>(m.id)];
    for (int k = 0; k < m.num_cells(); ++k) {
      const double drop = s.trace[static_cast<size_t>(m.id)](k) - s.lower_pressure[static_cast<size_t>(m.id)](k);
      out.interface_law_residual = std::max(out.interface_law_residual, std::abs(lam(k) / kp - drop));
    }
  }

  for (int i : d.partition.pure_neumann) {
    double inflow = 0.0;
    for (const MortarInterface& m : d.mortars) {
      const Vector& lam = s.lambda[static_cast<size_t>(m.id)];
      double q = 0.0;
      for (int k = 0; k < m.num_cells(); ++k) q += lam(k) * m.measures[static_cast<size_t>(k)];
      if (m.higher == i) inflow -= q;
      if (m.lower == i) inflow += q;
    }
    const SubdomainGrid& g = d.mesh->subdomain(i);
    double exterior = 0.0;
    for (int f = 0; f < g.num_faces(); ++f)
      if (g.face_tags[static_cast<size_t>(f)].kind == BoundaryKind::NeumannExterior)
        exterior += g.face_tags[static_cast<size_t>(f)].value * g.face_areas[static_cast<size_t>(f)];
    out.pure_neumann_imbalance.emplace_back(i, inflow - exterior - param_source(d, i).sum());
  }
  return out;
}

double boundary_flux(const Discretization& d, const Solution& s, const std::function<bool(const Point&)>& where) {
  double q = 0.0;
  for (int i = 0; i < d.mesh->size(); ++i)
    for (const BoundaryFlux& b : subdomain_fluxes(d, s, i).boundary)
      if (where(b.where)) q += b.flux;
  return q;
}

}  // namespace mdfc
