#pragma once

/// @file mortar.hpp
/// @brief P0 mortar grids on interfaces, the projection pair between mortar
/// and subdomain traces, the discrete divergence and the interface mass.
///
/// Mortar unknowns are flux densities per unit interface measure; a positive
/// value means flow leaving the higher-dimensional neighbor across that side.

#include "mdfc/linalg.hpp"
#include "mdfc/mesh.hpp"

#include <array>
#include <vector>

namespace mdfc {

struct MortarInterface {
  int id = -1;
  /// Index into MixedDimMesh::pairings().
  int pairing = -1;
  int lower = -1;
  int higher = -1;
  int side = 0;
  int lower_dim = 1;
  /// Arclength breakpoints along the lower subdomain; {0, 1} for a point.
  std::vector<double> breaks;
  std::vector<double> measures;
  /// End points of each mortar cell (coincident for a point interface).
  std::vector<std::array<Point, 2>> segments;

  int num_cells() const { return static_cast<int>(measures.size()); }
  double measure() const;
};

/// One mortar grid per mesh pairing, in pairing order. Both sides of a 1D
/// subdomain share the same partition of max(1, round(ratio * cells)) equal
/// cells; point interfaces get a single cell of measure 1.
/// Throws std::invalid_argument for ratio <= 0.
std::vector<MortarInterface> build_mortar_grids(const MixedDimMesh& mesh, double coarsening_ratio);

/// Offsets of each interface in the stacked mortar vector (size n + 1).
std::vector<int> mortar_offsets(const std::vector<MortarInterface>& mortars);

/// Piece of a basis function on one entity (a boundary face of the higher
/// grid, or a cell of the lower grid). v0 / v1 are the values at the first /
/// second node of the entity; linear in between.
struct BasisPiece {
  int entity = -1;
  double v0 = 1.0;
  double v1 = 1.0;
};

/// A trace or pressure basis function. dof < 0 marks a function whose
/// coefficient is fixed by Dirichlet data to fixed_value.
struct BasisFunction {
  int dof = -1;
  double fixed_value = 0.0;
  std::vector<BasisPiece> pieces;
};

struct BasisLayout {
  int num_dofs = 0;
  std::vector<BasisFunction> functions;
  /// Functions are the cells of the shared mortar partition of this
  /// (lower) subdomain rather than pieces on grid entities.
  bool on_mortar = false;
};

/// Overlaps between one mortar grid and the trace basis of its higher
/// neighbor and the pressure basis of its lower subdomain.
struct ProjectionPair {
  int interface = -1;
  /// Overlap B (mortar cells x trace functions); Pi_T = M^-1 B, Pi_N = -B^T.
  linalg::SparseMatrix higher_overlap;
  linalg::SparseMatrix lower_overlap;
  /// Diagonal of the mortar mass M_T (cell measures).
  linalg::Vector mass;
  /// Overlaps expressed on subdomain unknowns, fixed functions moved to offsets.
  linalg::SparseMatrix higher_matrix;
  linalg::Vector higher_offset;
  linalg::SparseMatrix lower_matrix;
  linalg::Vector lower_offset;

  linalg::SparseMatrix pi_trace() const;
  linalg::SparseMatrix pi_neumann() const;
  /// Mortar projection of a higher trace given by its subdomain unknowns.
  linalg::Vector project_trace(const linalg::Vector& higher_dofs) const;
  linalg::Vector project_pressure(const linalg::Vector& lower_dofs) const;
};

/// Exact interval-overlap integration of piecewise linear bases against P0
/// mortar cells. trace_layouts and pressure_layouts are indexed by subdomain.
/// Throws GeometryMismatch if the overlap total of an interface differs from
/// its measure by more than 1e-9.
std::vector<ProjectionPair> assemble_projections(const MixedDimMesh& mesh,
                                                 const std::vector<MortarInterface>& mortars,
                                                 const std::vector<BasisLayout>& trace_layouts,
                                                 const std::vector<BasisLayout>& pressure_layouts);

/// Incidence operator from the stacked mortar vector to subdomain loads.
/// Rows [0, n) are Neumann rows (row k passes mortar value k to the higher
/// neighbor); the remaining rows are sink rows, one per cell of each lower
/// subdomain's mortar partition (one per point for 0D), carrying -1 for
/// every mortar value on that cell.
struct DivergenceOperator {
  struct Row {
    bool sink = false;
    int subdomain = -1;
    /// Mortar cell (Neumann rows) or partition cell (sink rows).
    int index = -1;
    /// Interface of a Neumann row, -1 for sink rows.
    int interface = -1;
  };
  linalg::SparseMatrix matrix;
  std::vector<Row> rows;
  int num_neumann_rows = 0;
  int num_sink_rows = 0;
};

DivergenceOperator assemble_divergence(const MixedDimMesh& mesh, const std::vector<MortarInterface>& mortars);

/// Diagonal of the inverse-permeability mortar mass: measure / kappa_perp.
/// Throws DegenerateKappaPerp if any kappa_perp <= 0.
linalg::Vector assemble_perp_mass(const std::vector<MortarInterface>& mortars, const std::vector<double>& kappa_perp);

}  // namespace mdfc
