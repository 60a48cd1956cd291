#pragma once

/// @file assembly.hpp
/// @brief Coupled mixed-dimensional problem: subdomain classification, the
/// monolithic block system, the flux Schur complement and diagnostics.
///
/// Block system, with U_i the coupling of the stacked mortar vector into the
/// equations of subdomain i and K the inverse-permeability mortar mass:
///
///     [ A    U ] [x]   [data]
///     [ -U^T K ] [l] = [g   ]
///
/// Mortar row k states (measure_k / kappa_perp) l_k = (t_higher - p_lower, 1_k).

#include "mdfc/disc.hpp"
#include "mdfc/linalg.hpp"
#include "mdfc/mesh.hpp"
#include "mdfc/mortar.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace mdfc {

struct Partition {
  /// Flowing subdomains (kappa_par above threshold, and all points).
  std::vector<int> flowing;
  /// Blocking subdomains (kappa_par at or below threshold).
  std::vector<int> blocking;
  /// Flowing subdomains without a Dirichlet boundary.
  std::vector<int> pure_neumann;

  bool is_blocking(int id) const;
  bool is_pure_neumann(int id) const;
};

/// Throws NestedBlockingDomains if a blocking subdomain has a blocking
/// higher-dimensional neighbor or any lower-dimensional neighbor.
Partition classify_subdomains(const MixedDimMesh& mesh, const std::vector<SubdomainParams>& params,
                              double kappa_threshold = 0.0);

struct ProblemSetup {
  Method method = Method::TPFA;
  /// Per subdomain.
  std::vector<SubdomainParams> params;
  /// Per mesh pairing.
  std::vector<double> kappa_perp;
  double mortar_ratio = 0.75;
  double kappa_threshold = 0.0;
};

/// All discrete pieces of one problem. Holds a pointer to the mesh, which
/// must outlive it.
struct Discretization {
  const MixedDimMesh* mesh = nullptr;
  ProblemSetup setup;
  Partition partition;
  std::vector<MortarInterface> mortars;
  std::vector<int> mortar_offset;
  std::vector<SubdomainOperator> operators;
  std::vector<ProjectionPair> projections;
  DivergenceOperator divergence;
  /// Diagonal of K.
  linalg::Vector perp_mass;

  /// U_i (dofs_i x mortar dofs), one per subdomain.
  std::vector<linalg::SparseMatrix> coupling;
  /// boundary_load - S psi, one per subdomain.
  std::vector<linalg::Vector> data;
  /// Fixed-trace contributions to the mortar rows.
  linalg::Vector mortar_rhs;

  int num_mortar() const { return mortar_offset.empty() ? 0 : mortar_offset.back(); }
};

/// Build mortars, operators, projections, divergence and couplings.
Discretization discretize(const MixedDimMesh& mesh, ProblemSetup setup);

/// Recompute coupling, data and mortar_rhs after editing operators or projections.
/// Throws MissingOperator / MissingProjection when pieces are absent.
void assemble_couplings(Discretization& disc);

struct BlockSystem {
  linalg::SparseMatrix matrix;
  linalg::Vector rhs;
  /// Global row of the first unknown of each subdomain.
  std::vector<int> subdomain_offset;
  /// Global row of the first mortar unknown of each interface.
  std::vector<int> interface_offset;
  /// Sizes of the blocks p_a, l_aa, l_ab, p_b in that order.
  std::array<int, 4> block_size{};
};

BlockSystem assemble_global_system(const Discretization& disc);

struct Solution {
  /// Unknowns per subdomain.
  std::vector<linalg::Vector> dofs;
  /// Cell pressures per subdomain.
  std::vector<linalg::Vector> cell_pressure;
  /// Mortar fluxes per interface, and stacked.
  std::vector<linalg::Vector> lambda;
  linalg::Vector lambda_stacked;
  /// Mortar projection of the higher trace and of the lower pressure.
  std::vector<linalg::Vector> trace;
  std::vector<linalg::Vector> lower_pressure;
  /// Kernel coefficients of the augmentation per subdomain (Schur path).
  std::vector<linalg::Vector> kernel_coefficients;
  double residual = 0.0;
};

/// Direct solve of the block system. Throws SingularSystem when no subdomain
/// has Dirichlet data or the factorization fails.
Solution solve_global(const Discretization& disc, const BlockSystem& system);
Solution solve_global(const Discretization& disc);

struct SchurSystem {
  /// K + sum U_i^T G_i U_i over mortar unknowns.
  linalg::DenseSymMatrix s;
  /// E = [U_i^T Z_i] for subdomains with kernel directions.
  linalg::DenseMatrix augmentation;
  /// [g + sum U_i^T G_i data_i ; -Z_i^T data_i].
  linalg::Vector rhs;
  /// Column offset of each subdomain in the augmentation (-1 if none).
  std::vector<int> kernel_offset;
  std::shared_ptr<const std::vector<LocalSolver>> solvers;

  int num_mortar() const { return static_cast<int>(s.size()); }
  int num_augmented() const { return static_cast<int>(augmentation.cols()); }
  /// [[S, -E], [-E^T, 0]].
  linalg::DenseMatrix full_matrix() const;
};

SchurSystem assemble_schur(const Discretization& disc);
Solution solve_schur(const Discretization& disc, const SchurSystem& schur);

struct Diagnostics {
  /// Per subdomain, per cell: sum of outward fluxes plus sinks (TPFA, RT0H,
  /// points and blocking cells; empty for P1).
  std::vector<std::vector<double>> cell_imbalance;
  double max_cell_imbalance = 0.0;
  double flux_scale = 0.0;
  /// Outward fluxes through all exterior boundaries, sign split.
  double boundary_inflow = 0.0;
  double boundary_outflow = 0.0;
  double total_sink = 0.0;
  /// boundary outward total + total sink.
  double global_imbalance = 0.0;
  /// Max over mortar cells of |l/kappa_perp - (trace - lower pressure)|.
  double interface_law_residual = 0.0;
  /// Per pure-Neumann subdomain: net mortar inflow minus its sink total.
  std::vector<std::pair<int, double>> pure_neumann_imbalance;
};

Diagnostics compute_diagnostics(const Discretization& disc, const Solution& sol);

/// Sum of outward exterior boundary fluxes at locations accepted by where.
double boundary_flux(const Discretization& disc, const Solution& sol, const std::function<bool(const Point&)>& where);

}  // namespace mdfc
