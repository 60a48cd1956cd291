#include "disc_internal.hpp"

#include <algorithm>

namespace mdfc {

using linalg::Triplet;
using linalg::Vector;

SubdomainOperator assemble_point_or_blocking(const SubdomainGrid& grid, const SubdomainParams& params,
                                             const std::vector<double>& partition_breaks) {
  detail::check_params(grid, params, false);
  SubdomainOperator op;
  op.subdomain = grid.id;
  op.dim = grid.dim;
  op.has_dirichlet = false;
  const int nc = grid.num_cells();

  if (partition_breaks.empty()) {
    if (grid.dim != 0) throw std::invalid_argument("blocking operator needs the mortar partition");
    op.kind = OperatorKind::POINT;
    op.stiffness = linalg::SparseMatrix(1, 1);
    op.boundary_load = Vector::Zero(1);
    op.source_injection = linalg::from_triplets(1, nc, {Triplet(0, 0, 1.0)});
    op.neumann_injection = linalg::SparseMatrix(1, 0);
    op.pressure.num_dofs = 1;
    op.pressure.functions.push_back({0, 0.0, {{0, 1.0, 1.0}}});
    op.trace.num_dofs = 1;
    op.mean_weights = Vector::Ones(1);
    op.cell_pressure = linalg::from_triplets(nc, 1, {Triplet(0, 0, 1.0)});
    op.cell_pressure_offset = Vector::Zero(nc);
    return op;
  }

  if (grid.dim != 1) throw std::invalid_argument("blocking operator needs a 1D grid");
  op.kind = OperatorKind::BLOCKING;
  const int n = static_cast<int>(partition_breaks.size()) - 1;
  const std::vector<double> s = grid.arclength();
  op.stiffness = linalg::SparseMatrix(n, n);
  op.boundary_load = Vector::Zero(n);
  op.neumann_injection = linalg::SparseMatrix(n, 0);
  op.trace.num_dofs = n;
  op.pressure.num_dofs = n;
  op.pressure.on_mortar = true;
  op.mean_weights.resize(n);
  for (int k = 0; k < n; ++k)
    op.mean_weights(k) = partition_breaks[static_cast<size_t>(k) + 1] - partition_breaks[static_cast<size_t>(k)];

  // fraction of cell c inside partition cell k
  std::vector<Triplet> src, cp;
  for (int c = 0; c < nc; ++c) {
    const double a = s[static_cast<size_t>(c)], b = s[static_cast<size_t>(c) + 1];
    for (int k = 0; k < n; ++k) {
      const double lo = std::max(a, partition_breaks[static_cast<size_t>(k)]);
      const double hi = std::min(b, partition_breaks[static_cast<size_t>(k) + 1]);
      if (hi <= lo) continue;
      const double w = (hi - lo) / (b - a);
      src.emplace_back(k, c, w);
      cp.emplace_back(c, k, w);
    }
  }
  op.source_injection = linalg::from_triplets(n, nc, src);
  op.cell_pressure = linalg::from_triplets(nc, n, cp);
  op.cell_pressure_offset = Vector::Zero(nc);
  return op;
}

}  // namespace mdfc
