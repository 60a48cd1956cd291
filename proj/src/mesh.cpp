#include "mdfc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdfc {

bool SubdomainGrid::is_simplicial() const {
  const size_t expected = static_cast<size_t>(dim) + 1;
  return std::all_of(cells.begin(), cells.end(), [&](const auto& c) { return c.size() == expected; });
}

bool SubdomainGrid::has_dirichlet() const {
  return std::any_of(face_tags.begin(), face_tags.end(),
                     [](const FaceTag& t) { return t.kind == BoundaryKind::Dirichlet; });
}

double SubdomainGrid::measure() const {
  double total = 0.0;
  for (double v : cell_volumes) total += v;
  return total;
}

std::vector<double> SubdomainGrid::arclength() const {
  if (dim != 1) throw std::logic_error("arclength() requires a 1D grid");
  std::vector<double> s(nodes.size(), 0.0);
  for (size_t k = 1; k < nodes.size(); ++k) s[k] = s[k - 1] + (nodes[k] - nodes[k - 1]).norm();
  return s;
}

void SubdomainGrid::compute_geometry() {
  const size_t nf = face_nodes.size();
  const size_t nc = cells.size();
  face_areas.assign(nf, 0.0);
  face_centers.assign(nf, Point::Zero());
  face_normals.assign(nf, Point::Zero());
  cell_volumes.assign(nc, 0.0);
  cell_centers.assign(nc, Point::Zero());

  if (dim == 0) {
    for (size_t c = 0; c < nc; ++c) {
      cell_volumes[c] = 1.0;
      cell_centers[c] = nodes[static_cast<size_t>(cells[c][0])];
    }
    return;
  }

  if (dim == 1) {
    for (size_t c = 0; c < nc; ++c) {
      const Point& a = nodes[static_cast<size_t>(cells[c][0])];
      const Point& b = nodes[static_cast<size_t>(cells[c][1])];
      cell_volumes[c] = (b - a).norm();
      cell_centers[c] = 0.5 * (a + b);
    }
    for (size_t f = 0; f < nf; ++f) {
      face_areas[f] = 1.0;
      face_centers[f] = nodes[static_cast<size_t>(face_nodes[f][0])];
      const int owner = face_cells[f][0];
      const auto& cn = cells[static_cast<size_t>(owner)];
      Point tangent = nodes[static_cast<size_t>(cn[1])] - nodes[static_cast<size_t>(cn[0])];
      tangent.normalize();
      // outward from the owner: towards the face node
      face_normals[f] = (face_nodes[f][0] == cn[1]) ? tangent : Point(-tangent);
    }
    return;
  }

  for (size_t c = 0; c < nc; ++c) {
    const auto& cn = cells[c];
    double area2 = 0.0;
    Point centroid = Point::Zero();
    for (size_t k = 0; k < cn.size(); ++k) {
      const Point& p = nodes[static_cast<size_t>(cn[k])];
      const Point& q = nodes[static_cast<size_t>(cn[(k + 1) % cn.size()])];
      const double cross = p.x() * q.y() - q.x() * p.y();
      area2 += cross;
      centroid += cross * (p + q);
    }
    cell_volumes[c] = 0.5 * area2;
    cell_centers[c] = centroid / (3.0 * area2);
  }
  for (size_t f = 0; f < nf; ++f) {
    const Point& a = nodes[static_cast<size_t>(face_nodes[f][0])];
    const Point& b = nodes[static_cast<size_t>(face_nodes[f][1])];
    const Point d = b - a;
    face_areas[f] = d.norm();
    face_centers[f] = 0.5 * (a + b);
    face_normals[f] = Point(d.y(), -d.x()) / d.norm();
  }
}

std::vector<std::pair<int, unsigned>> FractureSpec::segment_boundary_flags(const Rectangle& domain) const {
  std::vector<std::pair<int, unsigned>> out;
  const double tol = 1e-12 * std::max(1.0, std::max(domain.x1 - domain.x0, domain.y1 - domain.y0));
  for (size_t fi = 0; fi < fractures.size(); ++fi) {
    const auto& poly = fractures[fi].polyline;
    for (size_t k = 0; k + 1 < poly.size(); ++k) {
      unsigned flags = 0;
      for (const Point& p : {poly[k], poly[k + 1]}) {
        if (std::abs(p.x() - domain.x0) < tol) flags |= 1u;
        if (std::abs(p.x() - domain.x1) < tol) flags |= 2u;
        if (std::abs(p.y() - domain.y0) < tol) flags |= 4u;
        if (std::abs(p.y() - domain.y1) < tol) flags |= 8u;
      }
      out.emplace_back(static_cast<int>(fi), flags);
    }
  }
  return out;
}

MixedDimMesh::MixedDimMesh(std::vector<SubdomainGrid> subdomains, std::vector<InterfacePairing> pairings,
                           double domain_measure, PlanarMesh source)
    : subdomains_(std::move(subdomains)),
      pairings_(std::move(pairings)),
      domain_measure_(domain_measure),
      source_(std::move(source)) {
  up_.assign(subdomains_.size(), {});
  down_.assign(subdomains_.size(), {});
  for (const auto& p : pairings_) {
    if (p.lower < 0 || p.higher < 0 || p.lower >= size() || p.higher >= size())
      throw std::out_of_range("interface pairing references a missing subdomain");
    up_[static_cast<size_t>(p.lower)].push_back(p.higher);
    down_[static_cast<size_t>(p.higher)].push_back(p.lower);
  }
  for (auto* sets : {&up_, &down_})
    for (auto& s : *sets) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
}

int MixedDimMesh::count(int dim) const {
  return static_cast<int>(std::count_if(subdomains_.begin(), subdomains_.end(),
                                        [dim](const SubdomainGrid& g) { return g.dim == dim; }));
}

}  // namespace mdfc
