#include "mdfc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace mdfc {

namespace {

constexpr double kGeomTol = 1e-12;

double polygon_area(const SubdomainGrid& g, const std::vector<int>& cell) {
  double a2 = 0.0;
  for (size_t k = 0; k < cell.size(); ++k) {
    const Point& p = g.nodes[static_cast<size_t>(cell[k])];
    const Point& q = g.nodes[static_cast<size_t>(cell[(k + 1) % cell.size()])];
    a2 += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a2;
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

const char* to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::NegativeVolume: return "NegativeVolume";
    case FindingKind::ZeroFaceArea: return "ZeroFaceArea";
    case FindingKind::NonUnitNormal: return "NonUnitNormal";
    case FindingKind::VolumeMismatch: return "VolumeMismatch";
    case FindingKind::DanglingInterfaceTag: return "DanglingInterfaceTag";
    case FindingKind::BadPointGrid: return "BadPointGrid";
    case FindingKind::DimensionMismatch: return "DimensionMismatch";
    case FindingKind::NeighborAsymmetry: return "NeighborAsymmetry";
    case FindingKind::UncoveredFractureCell: return "UncoveredFractureCell";
    case FindingKind::DisconnectedFromDirichlet: return "DisconnectedFromDirichlet";
  }
  return "Unknown";
}

bool ValidationReport::contains(FindingKind kind, int subdomain, int entity) const {
  return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) {
    return f.kind == kind && (subdomain < 0 || f.subdomain == subdomain) && (entity < 0 || f.entity == entity);
  });
}

ValidationReport validate_mesh(const MixedDimMesh& mesh) {
  ValidationReport r;
  auto add = [&r](FindingKind k, int sub, int ent, std::string msg) { r.findings.push_back({k, sub, ent, std::move(msg)}); };

  for (const SubdomainGrid& g : mesh.subdomains()) {
    const int id = g.id;
    if (g.dim == 0) {
      if (g.num_cells() != 1 || g.num_faces() != 0 || g.cell_volumes.size() != 1 || g.cell_volumes[0] != 1.0)
        add(FindingKind::BadPointGrid, id, -1, "point grid needs one unit cell and no faces");
    }
    if (g.cell_volumes.size() != g.cells.size() || g.face_areas.size() != g.face_nodes.size() ||
        g.face_normals.size() != g.face_nodes.size()) {
      add(FindingKind::VolumeMismatch, id, -1, "geometry arrays are out of date");
      continue;
    }

    double recomputed_total = 0.0;
    for (int c = 0; c < g.num_cells(); ++c) {
      const auto& cn = g.cells[static_cast<size_t>(c)];
      double v = g.cell_volumes[static_cast<size_t>(c)];
      if (g.dim == 2) v = polygon_area(g, cn);
      if (g.dim == 1) v = (g.nodes[static_cast<size_t>(cn[1])] - g.nodes[static_cast<size_t>(cn[0])]).norm();
      if (!(v > 0.0)) add(FindingKind::NegativeVolume, id, c, "cell volume " + std::to_string(v));
      if (std::abs(v - g.cell_volumes[static_cast<size_t>(c)]) > kGeomTol * std::max(1.0, std::abs(v)))
        add(FindingKind::VolumeMismatch, id, c, "stored volume differs from node geometry");
      recomputed_total += v;
    }
    if (g.dim == 2) r.total_volume += recomputed_total;

    for (int f = 0; f < g.num_faces(); ++f) {
      const auto fu = static_cast<size_t>(f);
      if (!(g.face_areas[fu] > 0.0)) add(FindingKind::ZeroFaceArea, id, f, "face area not positive");
      if (std::abs(g.face_normals[fu].norm() - 1.0) >= kGeomTol)
        add(FindingKind::NonUnitNormal, id, f, "normal length " + std::to_string(g.face_normals[fu].norm()));
      if (fu < g.face_tags.size() && g.face_tags[fu].kind == BoundaryKind::Interface) {
        const int lower = g.face_tags[fu].lower;
        if (lower < 0 || lower >= mesh.size() || !contains(mesh.down_neighbors(id), lower) ||
            mesh.subdomain(lower).dim != g.dim - 1)
          add(FindingKind::DanglingInterfaceTag, id, f, "interface tag references subdomain " + std::to_string(lower));
      }
    }

    for (int j : mesh.up_neighbors(id)) {
      if (mesh.subdomain(j).dim != g.dim + 1)
        add(FindingKind::DimensionMismatch, id, j, "up-neighbor of dimension " + std::to_string(mesh.subdomain(j).dim));
      if (!contains(mesh.down_neighbors(j), id)) add(FindingKind::NeighborAsymmetry, id, j, "missing down link");
    }
    for (int j : mesh.down_neighbors(id))
      if (!contains(mesh.up_neighbors(j), id)) add(FindingKind::NeighborAsymmetry, id, j, "missing up link");
  }

  // Coverage of fracture cells: one coincident higher face per side.
  for (const SubdomainGrid& g : mesh.subdomains()) {
    if (g.dim != 1) continue;
    std::vector<int> covered_plus(static_cast<size_t>(g.num_cells()), 0), covered_minus = covered_plus;
    for (const auto& p : mesh.pairings()) {
      if (p.lower != g.id) continue;
      if (p.higher_faces.size() != static_cast<size_t>(g.num_cells())) continue;
      const SubdomainGrid& h = mesh.subdomain(p.higher);
      for (int c = 0; c < g.num_cells(); ++c) {
        const int f = p.higher_faces[static_cast<size_t>(c)];
        if (f < 0 || f >= h.num_faces()) continue;
        const double gap = (h.face_centers[static_cast<size_t>(f)] - g.cell_centers[static_cast<size_t>(c)]).norm();
        const double dl = std::abs(h.face_areas[static_cast<size_t>(f)] - g.cell_volumes[static_cast<size_t>(c)]);
        if (gap > 1e-10 || dl > 1e-10) continue;
        (p.side > 0 ? covered_plus : covered_minus)[static_cast<size_t>(c)] += 1;
      }
    }
    for (int c = 0; c < g.num_cells(); ++c)
      if (covered_plus[static_cast<size_t>(c)] != 1 || covered_minus[static_cast<size_t>(c)] != 1)
        add(FindingKind::UncoveredFractureCell, g.id, c, "fracture cell not covered once per side");
  }

  const double measure = mesh.domain_measure();
  if (mesh.count(2) > 0 && std::abs(r.total_volume - measure) > kGeomTol * std::max(1.0, measure))
    add(FindingKind::VolumeMismatch, -1, -1, "2D volume differs from domain measure");

  // Every subdomain must be reachable from a Dirichlet subdomain through the
  // dimensional adjacency graph. Meshes without any Dirichlet face carry no
  // boundary data and are not checked.
  std::vector<char> seen(static_cast<size_t>(mesh.size()), 0);
  std::queue<int> q;
  bool any_dirichlet = false;
  for (const auto& g : mesh.subdomains())
    if (g.has_dirichlet()) {
      any_dirichlet = true;
      seen[static_cast<size_t>(g.id)] = 1;
      q.push(g.id);
    }
  while (!q.empty()) {
    const int i = q.front();
    q.pop();
    for (const auto* nb : {&mesh.up_neighbors(i), &mesh.down_neighbors(i)})
      for (int j : *nb)
        if (!seen[static_cast<size_t>(j)]) {
          seen[static_cast<size_t>(j)] = 1;
          q.push(j);
        }
  }
  for (int i = 0; any_dirichlet && i < mesh.size(); ++i)
    if (!seen[static_cast<size_t>(i)])
      add(FindingKind::DisconnectedFromDirichlet, i, -1, "no path to a Dirichlet boundary");
  return r;
}

}  // namespace mdfc
