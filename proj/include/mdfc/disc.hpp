#pragma once

/// @file disc.hpp
/// @brief Subdomain discretizations: the local solution operator mapping
/// sinks and boundary fluxes to pressures and traces.
///
/// Every operator solves
///
///     A x = boundary_load - S psi - N theta
///
/// where psi holds integrated sinks per cell and theta holds integrated
/// outward boundary fluxes per trace basis function. Traces are read from x
/// through the trace basis; Dirichlet-fixed basis functions carry their value.

#include "mdfc/linalg.hpp"
#include "mdfc/mesh.hpp"
#include "mdfc/mortar.hpp"

#include <memory>
#include <string>
#include <vector>

namespace mdfc {

enum class Method { TPFA, P1, RT0H };
enum class OperatorKind { TPFA, P1, RT0H, POINT, BLOCKING };

const char* to_string(Method m);
const char* to_string(OperatorKind k);
/// Accepts "tpfa", "p1", "rt0h"; throws std::invalid_argument otherwise.
Method parse_method(const std::string& name);

struct SubdomainParams {
  /// Tangential permeability per cell.
  std::vector<double> kappa;
  /// Integrated sink per cell.
  std::vector<double> source;

  static SubdomainParams uniform(const SubdomainGrid& grid, double kappa, double source_density = 0.0);
};

struct SubdomainOperator {
  OperatorKind kind = OperatorKind::TPFA;
  int subdomain = -1;
  int dim = 2;

  linalg::SparseMatrix stiffness;
  /// Dirichlet and exterior Neumann contributions.
  linalg::Vector boundary_load;
  /// dofs x cells.
  linalg::SparseMatrix source_injection;
  /// dofs x trace functions.
  linalg::SparseMatrix neumann_injection;
  /// Basis of the trace on interface faces (higher role).
  BasisLayout trace;
  /// Basis of the pressure on cells (lower role).
  BasisLayout pressure;
  /// Weights of the zero-mean constraint used when has_dirichlet is false.
  linalg::Vector mean_weights;
  bool has_dirichlet = false;

  /// Cell pressures = cell_pressure * x + cell_pressure_offset.
  linalg::SparseMatrix cell_pressure;
  linalg::Vector cell_pressure_offset;

  /// Nodal reactions at Dirichlet nodes (P1 only):
  /// R = -(reaction_matrix x + reaction_offset + reaction_source psi + reaction_trace theta).
  linalg::SparseMatrix reaction_matrix;
  linalg::Vector reaction_offset;
  linalg::SparseMatrix reaction_source;
  linalg::SparseMatrix reaction_trace;
  std::vector<Point> reaction_points;

  int num_dofs() const { return static_cast<int>(stiffness.rows()); }
  int num_trace() const { return static_cast<int>(trace.functions.size()); }
  /// boundary_load - S psi - N theta (empty vectors mean zero).
  linalg::Vector load(const linalg::Vector& psi, const linalg::Vector& theta) const;
  /// Trace values per trace function.
  linalg::Vector trace_values(const linalg::Vector& x) const;
  linalg::Vector cell_pressures(const linalg::Vector& x) const;
};

/// Finite volume with harmonic two-point transmissibilities. Interface faces
/// carry a face-pressure unknown that doubles as the trace.
/// Throws ZeroDistance if a cell center coincides with a face center.
SubdomainOperator assemble_tpfa(const SubdomainGrid& grid, const SubdomainParams& params);

/// Linear Lagrange elements, Dirichlet nodes eliminated.
/// Throws NonSimplicialGrid on non-triangular 2D cells.
SubdomainOperator assemble_p1(const SubdomainGrid& grid, const SubdomainParams& params);

/// Lowest-order Raviart-Thomas mixed elements, hybridized: fluxes are
/// eliminated cell by cell, cell pressures and face-pressure multipliers
/// remain. Throws NonSimplicialGrid on non-triangular 2D cells.
SubdomainOperator assemble_rt0h(const SubdomainGrid& grid, const SubdomainParams& params);

/// Pressure-only operator for a 0D point (partition_cells empty) or for a
/// blocking subdomain whose pressure lives on the mortar partition given by
/// its arclength breaks.
SubdomainOperator assemble_point_or_blocking(const SubdomainGrid& grid, const SubdomainParams& params,
                                             const std::vector<double>& partition_breaks = {});

SubdomainOperator assemble_operator(Method method, const SubdomainGrid& grid, const SubdomainParams& params);

/// Factorization of one operator reused across right-hand sides. Operators
/// without Dirichlet data are solved with a zero weighted-mean constraint;
/// blocking operators have no stiffness and return zero.
class LocalSolver {
 public:
  explicit LocalSolver(const SubdomainOperator& op);
  ~LocalSolver();
  LocalSolver(LocalSolver&&) noexcept;
  LocalSolver& operator=(LocalSolver&&) noexcept;

  linalg::Vector solve(const linalg::Vector& rhs) const;
  /// Basis of the kernel directions handled by the augmentation (empty for
  /// operators with Dirichlet data).
  const linalg::DenseMatrix& kernel() const { return kernel_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  linalg::DenseMatrix kernel_;
};

struct LocalSolution {
  linalg::Vector p;
  linalg::Vector t;
};

/// Solve the local problem for sinks psi and trace fluxes theta. Without
/// Dirichlet data the loads must balance (to 1e-9 of their scale) and p has
/// zero weighted mean. Throws IncompatibleData otherwise.
LocalSolution apply_solution_operator(const SubdomainOperator& op, const linalg::Vector& psi,
                                      const linalg::Vector& theta);
LocalSolution apply_solution_operator(const SubdomainOperator& op, const LocalSolver& solver,
                                      const linalg::Vector& psi, const linalg::Vector& theta);

struct BoundaryFlux {
  Point where;
  /// Outward integrated flux.
  double flux = 0.0;
  bool dirichlet = false;
};

struct FluxReport {
  /// Outward integrated flux through each face of each cell (TPFA, RT0H);
  /// empty for methods without a local flux.
  std::vector<std::vector<double>> cell_face_flux;
  /// Fluxes through exterior boundary faces, or Dirichlet node reactions (P1).
  std::vector<BoundaryFlux> boundary;
};

/// Recover fluxes from a local solution with trace fluxes theta.
FluxReport recover_fluxes(const SubdomainGrid& grid, const SubdomainParams& params, const SubdomainOperator& op,
                          const linalg::Vector& x, const linalg::Vector& psi, const linalg::Vector& theta);

}  // namespace mdfc
