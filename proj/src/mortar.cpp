#include "mdfc/mortar.hpp"

#include "mdfc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace mdfc {

using linalg::SparseMatrix;
using linalg::Triplet;
using linalg::Vector;

namespace {

Point point_at(const SubdomainGrid& g, const std::vector<double>& s, double t) {
  const auto it = std::upper_bound(s.begin(), s.end(), t);
  size_t k = it == s.begin() ? 0 : static_cast<size_t>(it - s.begin()) - 1;
  k = std::min(k, s.size() - 2);
  const double len = s[k + 1] - s[k];
  const double w = len > 0.0 ? (t - s[k]) / len : 0.0;
  return (1.0 - w) * g.nodes[k] + w * g.nodes[k + 1];
}

// Integral over [a, b] of the linear function with values (fa, fb) at (sa, sb).
double linear_integral(double sa, double sb, double fa, double fb, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double w = (mid - sa) / (sb - sa);
  return (b - a) * ((1.0 - w) * fa + w * fb);
}

// Accumulates overlaps of one linear piece on [sa, sb] with the mortar cells.
void add_piece(const MortarInterface& m, int column, double sa, double sb, double fa, double fb,
               std::vector<Triplet>& out) {
  const auto& br = m.breaks;
  auto k = static_cast<size_t>(std::max<long>(0, std::upper_bound(br.begin(), br.end(), sa) - br.begin() - 1));
  for (; k + 1 < br.size() && br[k] < sb; ++k) {
    const double a = std::max(sa, br[k]);
    const double b = std::min(sb, br[k + 1]);
    if (b <= a) continue;
    const double v = linear_integral(sa, sb, fa, fb, a, b);
    if (v != 0.0) out.emplace_back(static_cast<linalg::Index>(k), column, v);
  }
}

struct DofSplit {
  SparseMatrix matrix;
  Vector offset;
};

DofSplit split_fixed(const SparseMatrix& overlap, const BasisLayout& layout) {
  std::vector<Triplet> t;
  Vector offset = Vector::Zero(overlap.rows());
  for (linalg::Index r = 0; r < overlap.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(overlap, r); it; ++it) {
      const BasisFunction& f = layout.functions[static_cast<size_t>(it.col())];
      if (f.dof >= 0)
        t.emplace_back(r, f.dof, it.value());
      else
        offset(r) += it.value() * f.fixed_value;
    }
  return {linalg::from_triplets(overlap.rows(), layout.num_dofs, t), offset};
}

double overlap_total(const SparseMatrix& m) {
  double s = 0.0;
  for (linalg::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) s += it.value();
  return s;
}

}  // namespace

double MortarInterface::measure() const {
  double s = 0.0;
  for (double v : measures) s += v;
  return s;
}

std::vector<MortarInterface> build_mortar_grids(const MixedDimMesh& mesh, double coarsening_ratio) {
  if (!(coarsening_ratio > 0.0) || !std::isfinite(coarsening_ratio))
    throw std::invalid_argument("mortar coarsening ratio must be positive");
  std::vector<MortarInterface> out;
  const auto& pairings = mesh.pairings();
  for (size_t p = 0; p < pairings.size(); ++p) {
    const InterfacePairing& pr = pairings[p];
    const SubdomainGrid& lower = mesh.subdomain(pr.lower);
    MortarInterface m;
    m.id = static_cast<int>(out.size());
    m.pairing = static_cast<int>(p);
    m.lower = pr.lower;
    m.higher = pr.higher;
    m.side = pr.side;
    m.lower_dim = lower.dim;
    if (lower.dim == 0) {
      m.breaks = {0.0, 1.0};
      m.measures = {1.0};
      m.segments = {{lower.nodes[0], lower.nodes[0]}};
    } else {
      const std::vector<double> s = lower.arclength();
      const double length = s.back();
      const long n = std::max(1L, std::lround(coarsening_ratio * lower.num_cells()));
      m.breaks.resize(static_cast<size_t>(n) + 1);
      for (long k = 0; k <= n; ++k) m.breaks[static_cast<size_t>(k)] = length * static_cast<double>(k) / n;
      m.breaks.back() = length;
      for (long k = 0; k < n; ++k) {
        const double a = m.breaks[static_cast<size_t>(k)], b = m.breaks[static_cast<size_t>(k) + 1];
        m.measures.push_back(b - a);
        m.segments.push_back({point_at(lower, s, a), point_at(lower, s, b)});
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<int> mortar_offsets(const std::vector<MortarInterface>& mortars) {
  std::vector<int> off(mortars.size() + 1, 0);
  for (size_t i = 0; i < mortars.size(); ++i) off[i + 1] = off[i] + mortars[i].num_cells();
  return off;
}

SparseMatrix ProjectionPair::pi_trace() const {
  SparseMatrix p = higher_overlap;
  for (linalg::Index r = 0; r < p.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(p, r); it; ++it) it.valueRef() /= mass(r);
  return p;
}

SparseMatrix ProjectionPair::pi_neumann() const {
  SparseMatrix p = -SparseMatrix(higher_overlap.transpose());
  return p;
}

Vector ProjectionPair::project_trace(const Vector& higher_dofs) const {
  return (higher_matrix * higher_dofs + higher_offset).cwiseQuotient(mass);
}

Vector ProjectionPair::project_pressure(const Vector& lower_dofs) const {
  return (lower_matrix * lower_dofs + lower_offset).cwiseQuotient(mass);
}

std::vector<ProjectionPair> assemble_projections(const MixedDimMesh& mesh,
                                                 const std::vector<MortarInterface>& mortars,
                                                 const std::vector<BasisLayout>& trace_layouts,
                                                 const std::vector<BasisLayout>& pressure_layouts) {
  if (trace_layouts.size() != static_cast<size_t>(mesh.size()) ||
      pressure_layouts.size() != static_cast<size_t>(mesh.size()))
    throw MissingProjection("basis layouts must be given for every subdomain");
  std::vector<ProjectionPair> out;
  out.reserve(mortars.size());
  for (const MortarInterface& m : mortars) {
    const InterfacePairing& pr = mesh.pairings().at(static_cast<size_t>(m.pairing));
    const SubdomainGrid& lower = mesh.subdomain(m.lower);
    const SubdomainGrid& higher = mesh.subdomain(m.higher);
    const BasisLayout& trace = trace_layouts[static_cast<size_t>(m.higher)];
    const BasisLayout& pressure = pressure_layouts[static_cast<size_t>(m.lower)];
    const auto nm = static_cast<linalg::Index>(m.num_cells());

    ProjectionPair pp;
    pp.interface = m.id;
    pp.mass = Eigen::Map<const Vector>(m.measures.data(), nm);

    // Higher trace: face -> (lower cell, orientation).
    std::vector<Triplet> th;
    if (lower.dim == 0) {
      const int face = pr.higher_faces.at(0);
      for (size_t b = 0; b < trace.functions.size(); ++b)
        for (const BasisPiece& pc : trace.functions[b].pieces)
          if (pc.entity == face && pc.v0 != 0.0) th.emplace_back(0, static_cast<linalg::Index>(b), pc.v0);
    } else {
      const std::vector<double> s = lower.arclength();
      std::map<int, std::pair<int, bool>> face_cell;
      for (size_t c = 0; c < pr.higher_faces.size(); ++c) {
        const int f = pr.higher_faces[c];
        const Point& a = higher.nodes[static_cast<size_t>(higher.face_nodes[static_cast<size_t>(f)][0])];
        const bool forward = (a - lower.nodes[c]).norm() <= (a - lower.nodes[c + 1]).norm();
        face_cell[f] = {static_cast<int>(c), forward};
      }
      for (size_t b = 0; b < trace.functions.size(); ++b)
        for (const BasisPiece& pc : trace.functions[b].pieces) {
          auto it = face_cell.find(pc.entity);
          if (it == face_cell.end()) continue;
          const auto c = static_cast<size_t>(it->second.first);
          const double fa = it->second.second ? pc.v0 : pc.v1;
          const double fb = it->second.second ? pc.v1 : pc.v0;
          add_piece(m, static_cast<int>(b), s[c], s[c + 1], fa, fb, th);
        }
    }
    pp.higher_overlap = linalg::from_triplets(nm, static_cast<linalg::Index>(trace.functions.size()), th);

    std::vector<Triplet> tl;
    if (pressure.on_mortar) {
      for (linalg::Index k = 0; k < nm; ++k) tl.emplace_back(k, k, m.measures[static_cast<size_t>(k)]);
    } else if (lower.dim == 0) {
      for (size_t b = 0; b < pressure.functions.size(); ++b)
        for (const BasisPiece& pc : pressure.functions[b].pieces)
          if (pc.entity == 0 && pc.v0 != 0.0) tl.emplace_back(0, static_cast<linalg::Index>(b), pc.v0);
    } else {
      const std::vector<double> s = lower.arclength();
      for (size_t b = 0; b < pressure.functions.size(); ++b)
        for (const BasisPiece& pc : pressure.functions[b].pieces) {
          const auto c = static_cast<size_t>(pc.entity);
          add_piece(m, static_cast<int>(b), s[c], s[c + 1], pc.v0, pc.v1, tl);
        }
    }
    const auto nlf = pressure.on_mortar ? nm : static_cast<linalg::Index>(pressure.functions.size());
    pp.lower_overlap = linalg::from_triplets(nm, nlf, tl);

    const double total = m.measure();
    const double tol = 1e-9 * std::max(1.0, total);
    if (std::abs(overlap_total(pp.higher_overlap) - total) > tol)
      throw GeometryMismatch("trace overlap of interface " + std::to_string(m.id) + " sums to " +
                             std::to_string(overlap_total(pp.higher_overlap)) + ", interface measure " +
                             std::to_string(total));
    if (std::abs(overlap_total(pp.lower_overlap) - total) > tol)
      throw GeometryMismatch("pressure overlap of interface " + std::to_string(m.id) + " sums to " +
                             std::to_string(overlap_total(pp.lower_overlap)) + ", interface measure " +
                             std::to_string(total));

    auto hs = split_fixed(pp.higher_overlap, trace);
    pp.higher_matrix = std::move(hs.matrix);
    pp.higher_offset = std::move(hs.offset);
    if (pressure.on_mortar) {
      pp.lower_matrix = pp.lower_overlap;
      pp.lower_offset = Vector::Zero(nm);
    } else {
      auto ls = split_fixed(pp.lower_overlap, pressure);
      pp.lower_matrix = std::move(ls.matrix);
      pp.lower_offset = std::move(ls.offset);
    }
    out.push_back(std::move(pp));
  }
  return out;
}

DivergenceOperator assemble_divergence(const MixedDimMesh& mesh, const std::vector<MortarInterface>& mortars) {
  const std::vector<int> off = mortar_offsets(mortars);
  const int n = off.back();
  DivergenceOperator d;
  d.num_neumann_rows = n;
  std::vector<Triplet> t;
  for (const MortarInterface& m : mortars)
    for (int k = 0; k < m.num_cells(); ++k) {
      const int row = off[static_cast<size_t>(m.id)] + k;
      t.emplace_back(row, row, 1.0);
      d.rows.push_back({false, m.higher, k, m.id});
    }

  int row = n;
  for (int i = 0; i < mesh.size(); ++i) {
    std::vector<const MortarInterface*> below;
    for (const MortarInterface& m : mortars)
      if (m.lower == i) below.push_back(&m);
    if (below.empty()) continue;
    const int cells = mesh.subdomain(i).dim == 0 ? 1 : below.front()->num_cells();
    for (int k = 0; k < cells; ++k) {
      for (const MortarInterface* m : below) {
        const int col = mesh.subdomain(i).dim == 0 ? off[static_cast<size_t>(m->id)]
                                                   : off[static_cast<size_t>(m->id)] + k;
        t.emplace_back(row, col, -1.0);
      }
      d.rows.push_back({true, i, k, -1});
      ++row;
    }
  }
  d.num_sink_rows = row - n;
  d.matrix = linalg::from_triplets(row, n, t);
  return d;
}

Vector assemble_perp_mass(const std::vector<MortarInterface>& mortars, const std::vector<double>& kappa_perp) {
  if (kappa_perp.size() != mortars.size())
    throw DegenerateKappaPerp("kappa_perp must be given for every interface");
  const std::vector<int> off = mortar_offsets(mortars);
  Vector diag(off.back());
  for (const MortarInterface& m : mortars) {
    const double k = kappa_perp[static_cast<size_t>(m.id)];
    if (!(k > 0.0) || !std::isfinite(k))
      throw DegenerateKappaPerp("kappa_perp = " + std::to_string(k) + " on interface " + std::to_string(m.id));
    for (int c = 0; c < m.num_cells(); ++c) diag(off[static_cast<size_t>(m.id)] + c) = m.measures[static_cast<size_t>(c)] / k;
  }
  return diag;
}

}  // namespace mdfc
