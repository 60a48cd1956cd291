#include "mdfc/errors.hpp"
#include "mdfc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mdfc {

namespace {

constexpr double kLatticeTol = 1e-9;

// Index of the lattice line closest to t, or -1 if t is off the lattice.
int lattice_index(double t, double t0, double h, int n) {
  const double r = (t - t0) / h;
  const double k = std::round(r);
  if (std::abs(r - k) > kLatticeTol || k < 0 || k > n) return -1;
  return static_cast<int>(k);
}

const SideCondition* side_of(const Rectangle& d, const BoundarySpec& spec, const Point& m) {
  const double tol = 1e-10 * std::max({1.0, d.x1 - d.x0, d.y1 - d.y0});
  if (std::abs(m.x() - d.x0) < tol) return &spec.left;
  if (std::abs(m.x() - d.x1) < tol) return &spec.right;
  if (std::abs(m.y() - d.y0) < tol) return &spec.bottom;
  if (std::abs(m.y() - d.y1) < tol) return &spec.top;
  return nullptr;
}

}  // namespace

BoundaryEvaluator rectangle_evaluator(const Rectangle& domain, const BoundarySpec& spec) {
  BoundaryEvaluator ev;
  ev.edge = [domain, spec](const Point& a, const Point& b) -> std::pair<bool, double> {
    const Point m = 0.5 * (a + b);
    const SideCondition* s = side_of(domain, spec, m);
    if (s == nullptr) return {false, 0.0};
    return {s->dirichlet, s->dirichlet ? s->value_at(m) : s->a};
  };
  ev.dirichlet_at = [domain, spec](const Point& a, const Point& b, const Point& p) {
    const SideCondition* s = side_of(domain, spec, 0.5 * (a + b));
    return s == nullptr ? 0.0 : s->value_at(p);
  };
  return ev;
}

MixedDimMesh build_structured_mesh(const Rectangle& domain, int nx, int ny, GridKind kind,
                                   const FractureSpec& fractures, const BoundarySpec& boundary) {
  if (nx <= 0 || ny <= 0) throw EmptyDomain("grid resolution " + std::to_string(nx) + "x" + std::to_string(ny));
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0)) throw EmptyDomain("degenerate rectangle");
  const double hx = (domain.x1 - domain.x0) / nx;
  const double hy = (domain.y1 - domain.y0) / ny;
  auto node = [nx](int i, int j) { return j * (nx + 1) + i; };

  PlanarMesh pm;
  pm.nodes.reserve(static_cast<size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) pm.nodes.emplace_back(domain.x0 + i * hx, domain.y0 + j * hy);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int n00 = node(i, j), n10 = node(i + 1, j), n11 = node(i + 1, j + 1), n01 = node(i, j + 1);
      if (kind == GridKind::CartesianQuads) {
        pm.cells.push_back({n00, n10, n11, n01});
      } else {
        pm.cells.push_back({n00, n10, n11});
        pm.cells.push_back({n00, n11, n01});
      }
    }

  pm.fractures = fractures.fractures;
  for (size_t fi = 0; fi < fractures.fractures.size(); ++fi) {
    const auto& poly = fractures.fractures[fi].polyline;
    const std::string& name = fractures.fractures[fi].name;
    if (poly.size() < 2) throw NonConformingFracture("fracture " + name + " needs at least two points");
    for (size_t k = 0; k + 1 < poly.size(); ++k) {
      const Point& p = poly[k];
      const Point& q = poly[k + 1];
      const int ip = lattice_index(p.x(), domain.x0, hx, nx), jp = lattice_index(p.y(), domain.y0, hy, ny);
      const int iq = lattice_index(q.x(), domain.x0, hx, nx), jq = lattice_index(q.y(), domain.y0, hy, ny);
      if (ip < 0 || jp < 0 || iq < 0 || jq < 0)
        throw NonConformingFracture("fracture " + name + " has an endpoint off the " + std::to_string(nx) + "x" +
                                    std::to_string(ny) + " lattice");
      if ((ip != iq) == (jp != jq))
        throw NonConformingFracture("fracture " + name + " segment is not axis-aligned or has zero length");
      const int di = (iq > ip) - (iq < ip), dj = (jq > jp) - (jq < jp);
      for (int i = ip, j = jp; i != iq || j != jq; i += di, j += dj)
        pm.fracture_edges.push_back({node(i, j), node(i + di, j + dj), static_cast<int>(fi)});
    }
  }

  const BoundaryEvaluator ev = rectangle_evaluator(domain, boundary);
  auto add_boundary = [&](int a, int b) {
    const auto [dirichlet, value] = ev.edge(pm.nodes[static_cast<size_t>(a)], pm.nodes[static_cast<size_t>(b)]);
    if (dirichlet || value != 0.0) pm.boundary.push_back({a, b, dirichlet, value});
  };
  for (int i = 0; i < nx; ++i) {
    add_boundary(node(i, 0), node(i + 1, 0));
    add_boundary(node(i, ny), node(i + 1, ny));
  }
  for (int j = 0; j < ny; ++j) {
    add_boundary(node(0, j), node(0, j + 1));
    add_boundary(node(nx, j), node(nx, j + 1));
  }

  return split_planar_mesh(pm, ev);
}

}  // namespace mdfc
