#pragma once

#include "mdfc/disc.hpp"

namespace mdfc::detail {

void check_params(const SubdomainGrid& grid, const SubdomainParams& params, bool require_positive_kappa);

/// Throws NonSimplicialGrid unless every cell is a simplex.
void require_simplicial(const SubdomainGrid& grid, const char* method);

double half_transmissibility(const SubdomainGrid& grid, int cell, int face, double kappa);

/// Outward unit normal of face f seen from cell c.
Point outward_normal(const SubdomainGrid& grid, int cell, int face);

/// Inverse local mass of the lowest-order Raviart-Thomas basis (one row per
/// local face, outward unit-flux functions).
linalg::DenseMatrix rt0_inverse_mass(const SubdomainGrid& grid, int cell, double kappa);

FluxReport tpfa_fluxes(const SubdomainGrid& grid, const SubdomainParams& params, const SubdomainOperator& op,
                       const linalg::Vector& x);
FluxReport rt0h_fluxes(const SubdomainGrid& grid, const SubdomainParams& params, const SubdomainOperator& op,
                       const linalg::Vector& x);
FluxReport p1_fluxes(const SubdomainGrid& grid, const SubdomainOperator& op, const linalg::Vector& x,
                     const linalg::Vector& psi, const linalg::Vector& theta);

}  // namespace mdfc::detail
