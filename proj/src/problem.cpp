#include "mdfc/assembly.hpp"
#include "mdfc/errors.hpp"
#include "mdfc/parallel.hpp"

#include <algorithm>
#include <string>

namespace mdfc {

using linalg::SparseMatrix;
using linalg::Triplet;
using linalg::Vector;

bool Partition::is_blocking(int id) const { return std::binary_search(blocking.begin(), blocking.end(), id); }

bool Partition::is_pure_neumann(int id) const {
  return std::binary_search(pure_neumann.begin(), pure_neumann.end(), id);
}

Partition classify_subdomains(const MixedDimMesh& mesh, const std::vector<SubdomainParams>& params,
                              double kappa_threshold) {
  if (params.size() != static_cast<size_t>(mesh.size()))
    throw std::invalid_argument("parameters must be given for every subdomain");
  Partition part;
  for (int i = 0; i < mesh.size(); ++i) {
    const SubdomainGrid& g = mesh.subdomain(i);
    const auto& kappa = params[static_cast<size_t>(i)].kappa;
    bool blocking = false;
    if (g.dim > 0 && !kappa.empty())
      blocking = std::all_of(kappa.begin(), kappa.end(), [&](double k) { return k <= kappa_threshold; });
    if (blocking && g.dim == 2)
      throw std::invalid_argument("subdomain " + std::to_string(i) + " (" + g.name +
                                  ") has no tangential permeability; only fractures may block");
    if (blocking) {
      part.blocking.push_back(i);
    } else {
      part.flowing.push_back(i);
      if (!g.has_dirichlet()) part.pure_neumann.push_back(i);
    }
  }
  for (int b : part.blocking) {
    for (int up : mesh.up_neighbors(b))
      if (part.is_blocking(up))
        throw NestedBlockingDomains("blocking subdomain " + std::to_string(b) + " lies below blocking subdomain " +
                                    std::to_string(up));
    if (!mesh.down_neighbors(b).empty())
      throw NestedBlockingDomains("blocking subdomain " + std::to_string(b) +
                                  " has lower-dimensional neighbors; intersections need flowing parents");
  }
  return part;
}

Discretization discretize(const MixedDimMesh& mesh, ProblemSetup setup) {
  Discretization d;
  d.mesh = &mesh;
  d.partition = classify_subdomains(mesh, setup.params, setup.kappa_threshold);
  d.mortars = build_mortar_grids(mesh, setup.mortar_ratio);
  d.mortar_offset = mortar_offsets(d.mortars);

  const int n = mesh.size();
  d.operators.resize(static_cast<size_t>(n));
  parallel_for(n, [&](int i) {
    const SubdomainGrid& g = mesh.subdomain(i);
    const SubdomainParams& p = setup.params[static_cast<size_t>(i)];
    SubdomainOperator op;
    if (d.partition.is_blocking(i)) {
      const MortarInterface* m = nullptr;
      for (const MortarInterface& mi : d.mortars)
        if (mi.lower == i) {
          m = &mi;
          break;
        }
      if (m == nullptr) throw TopologyError("blocking subdomain " + std::to_string(i) + " has no interface");
      op = assemble_point_or_blocking(g, p, m->breaks);
    } else {
      op = assemble_operator(setup.method, g, p);
    }
    d.operators[static_cast<size_t>(i)] = std::move(op);
  });

  std::vector<BasisLayout> traces, pressures;
  for (const SubdomainOperator& op : d.operators) {
    traces.push_back(op.trace);
    pressures.push_back(op.pressure);
  }
  d.projections = assemble_projections(mesh, d.mortars, traces, pressures);
  d.divergence = assemble_divergence(mesh, d.mortars);
  d.perp_mass = assemble_perp_mass(d.mortars, setup.kappa_perp);
  d.setup = std::move(setup);
  assemble_couplings(d);
  return d;
}

void assemble_couplings(Discretization& d) {
  if (d.mesh == nullptr) throw MissingOperator("discretization has no mesh");
  const MixedDimMesh& mesh = *d.mesh;
  const int n = mesh.size();
  if (d.operators.size() != static_cast<size_t>(n)) throw MissingOperator("an operator is required for every subdomain");
  for (int i = 0; i < n; ++i)
    if (d.operators[static_cast<size_t>(i)].subdomain != i || d.operators[static_cast<size_t>(i)].stiffness.rows() == 0)
      throw MissingOperator("operator of subdomain " + std::to_string(i) + " is missing");
  if (d.projections.size() != d.mortars.size()) throw MissingProjection("a projection is required for every interface");
  for (size_t k = 0; k < d.projections.size(); ++k)
    if (d.projections[k].interface != static_cast<int>(k))
      throw MissingProjection("projection of interface " + std::to_string(k) + " is missing");
  if (d.setup.params.size() != static_cast<size_t>(n))
    throw std::invalid_argument("parameters must be given for every subdomain");

  const int nl = d.num_mortar();
  const DivergenceOperator& div = d.divergence;
  const auto nrows = static_cast<linalg::Index>(div.rows.size());

  // first interface below each subdomain: its lower matrix carries the shared partition
  std::vector<int> first_below(static_cast<size_t>(n), -1);
  for (const MortarInterface& m : d.mortars)
    if (first_below[static_cast<size_t>(m.lower)] < 0) first_below[static_cast<size_t>(m.lower)] = m.id;

  d.coupling.assign(static_cast<size_t>(n), SparseMatrix());
  d.data.assign(static_cast<size_t>(n), Vector());
  for (int i = 0; i < n; ++i) {
    const SubdomainOperator& op = d.operators[static_cast<size_t>(i)];
    std::vector<Triplet> inj;
    for (linalg::Index r = 0; r < nrows; ++r) {
      const DivergenceOperator::Row& row = div.rows[static_cast<size_t>(r)];
      if (row.subdomain != i) continue;
      const SparseMatrix& src = row.sink ? d.projections[static_cast<size_t>(first_below[static_cast<size_t>(i)])].lower_matrix
                                         : d.projections[static_cast<size_t>(row.interface)].higher_matrix;
      for (SparseMatrix::InnerIterator it(src, row.index); it; ++it) inj.emplace_back(it.col(), r, it.value());
    }
    const SparseMatrix injection = linalg::from_triplets(op.num_dofs(), nrows, inj);
    d.coupling[static_cast<size_t>(i)] = SparseMatrix(injection * div.matrix);
    d.coupling[static_cast<size_t>(i)].prune(0.0);

    const auto& source = d.setup.params[static_cast<size_t>(i)].source;
    Vector psi = Vector::Zero(op.source_injection.cols());
    for (size_t c = 0; c < source.size(); ++c) psi(static_cast<linalg::Index>(c)) = source[c];
    d.data[static_cast<size_t>(i)] = op.boundary_load - op.source_injection * psi;
  }

  d.mortar_rhs = Vector::Zero(nl);
  for (const MortarInterface& m : d.mortars) {
    const ProjectionPair& pp = d.projections[static_cast<size_t>(m.id)];
    d.mortar_rhs.segment(d.mortar_offset[static_cast<size_t>(m.id)], m.num_cells()) = pp.higher_offset - pp.lower_offset;
  }
}

}  // namespace mdfc
