#pragma once

#include "mdfc/assembly.hpp"

namespace mdfc::detail {

/// Fill pressures, traces and per-interface mortar values from raw unknowns.
Solution make_solution(const Discretization& disc, std::vector<linalg::Vector> dofs, linalg::Vector lambda);

}  // namespace mdfc::detail
