#include "disc_internal.hpp"

#include "mdfc/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mdfc {

using linalg::Vector;

const char* to_string(Method m) {
  switch (m) {
    case Method::TPFA: return "tpfa";
    case Method::P1: return "p1";
    case Method::RT0H: return "rt0h";
  }
  return "?";
}

const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::TPFA: return "tpfa";
    case OperatorKind::P1: return "p1";
    case OperatorKind::RT0H: return "rt0h";
    case OperatorKind::POINT: return "point";
    case OperatorKind::BLOCKING: return "blocking";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "tpfa") return Method::TPFA;
  if (name == "p1") return Method::P1;
  if (name == "rt0h") return Method::RT0H;
  throw std::invalid_argument("unknown method '" + name + "' (expected tpfa, p1 or rt0h)");
}

SubdomainParams SubdomainParams::uniform(const SubdomainGrid& grid, double kappa, double source_density) {
  SubdomainParams p;
  p.kappa.assign(static_cast<size_t>(grid.num_cells()), kappa);
  p.source.resize(static_cast<size_t>(grid.num_cells()));
  for (int c = 0; c < grid.num_cells(); ++c)
    p.source[static_cast<size_t>(c)] = source_density * grid.cell_volumes[static_cast<size_t>(c)];
  return p;
}

Vector SubdomainOperator::load(const Vector& psi, const Vector& theta) const {
  Vector b = boundary_load;
  if (psi.size() > 0) b -= source_injection * psi;
  if (theta.size() > 0) b -= neumann_injection * theta;
  return b;
}

Vector SubdomainOperator::trace_values(const Vector& x) const {
  Vector t(num_trace());
  for (int b = 0; b < num_trace(); ++b) {
    const BasisFunction& f = trace.functions[static_cast<size_t>(b)];
    t(b) = f.dof >= 0 ? x(f.dof) : f.fixed_value;
  }
  return t;
}

Vector SubdomainOperator::cell_pressures(const Vector& x) const { return cell_pressure * x + cell_pressure_offset; }

SubdomainOperator assemble_operator(Method method, const SubdomainGrid& grid, const SubdomainParams& params) {
  if (grid.dim == 0) return assemble_point_or_blocking(grid, params);
  switch (method) {
    case Method::TPFA: return assemble_tpfa(grid, params);
    case Method::P1: return assemble_p1(grid, params);
    case Method::RT0H: return assemble_rt0h(grid, params);
  }
  throw std::invalid_argument("unknown method");
}

FluxReport recover_fluxes(const SubdomainGrid& grid, const SubdomainParams& params, const SubdomainOperator& op,
                          const Vector& x, const Vector& psi, const Vector& theta) {
  switch (op.kind) {
    case OperatorKind::TPFA: return detail::tpfa_fluxes(grid, params, op, x);
    case OperatorKind::RT0H: return detail::rt0h_fluxes(grid, params, op, x);
    case OperatorKind::P1: return detail::p1_fluxes(grid, op, x, psi, theta);
    case OperatorKind::POINT:
    case OperatorKind::BLOCKING: {
      FluxReport r;
      r.cell_face_flux.assign(static_cast<size_t>(grid.num_cells()), {});
      return r;
    }
  }
  return {};
}

namespace detail {

void check_params(const SubdomainGrid& grid, const SubdomainParams& params, bool require_positive_kappa) {
  const auto nc = static_cast<size_t>(grid.num_cells());
  if (params.kappa.size() != nc || (!params.source.empty() && params.source.size() != nc))
    throw std::invalid_argument("parameters of subdomain " + std::to_string(grid.id) + " do not match its cells");
  for (double k : params.kappa) {
    if (!std::isfinite(k) || k < 0.0) throw std::invalid_argument("negative or non-finite permeability");
    if (require_positive_kappa && k <= 0.0)
      throw std::invalid_argument("zero tangential permeability in subdomain " + std::to_string(grid.id) +
                                  " requires the blocking path");
  }
}

void require_simplicial(const SubdomainGrid& grid, const char* method) {
  if (grid.dim < 1) throw std::invalid_argument(std::string(method) + " needs a 1D or 2D grid");
  if (!grid.is_simplicial())
    throw NonSimplicialGrid(std::string(method) + " requires a simplicial grid; subdomain " + std::to_string(grid.id) +
                            " has non-simplex cells");
}

Point outward_normal(const SubdomainGrid& grid, int cell, int face) {
  const Point& n = grid.face_normals[static_cast<size_t>(face)];
  return grid.face_cells[static_cast<size_t>(face)][0] == cell ? n : Point(-n);
}

double half_transmissibility(const SubdomainGrid& grid, int cell, int face, double kappa) {
  const Point d = grid.face_centers[static_cast<size_t>(face)] - grid.cell_centers[static_cast<size_t>(cell)];
  const double d2 = d.squaredNorm();
  const double scale = std::max(grid.cell_volumes[static_cast<size_t>(cell)], 1e-300);
  if (d2 <= 1e-24 * std::pow(scale, 2.0 / std::max(grid.dim, 1)))
    throw ZeroDistance("cell " + std::to_string(cell) + " center coincides with face " + std::to_string(face) +
                       " center in subdomain " + std::to_string(grid.id));
  // along a polyline the face normal follows only one of the two segments
  if (grid.dim == 1) return kappa * grid.face_areas[static_cast<size_t>(face)] / std::sqrt(d2);
  const double proj = std::abs(outward_normal(grid, cell, face).dot(d));
  return kappa * grid.face_areas[static_cast<size_t>(face)] * proj / d2;
}

}  // namespace detail

}  // namespace mdfc
