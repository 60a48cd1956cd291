#include "mdfc/errors.hpp"
#include "mdfc/harness.hpp"

#include <algorithm>

namespace mdfc {

namespace {

Fracture segment(const std::string& name, std::vector<Point> pts) { return Fracture{name, std::move(pts), std::nullopt}; }

void apply_sides(const CaseConfig& cfg, BoundarySpec& b) {
  if (cfg.left) b.left = *cfg.left;
  if (cfg.right) b.right = *cfg.right;
  if (cfg.bottom) b.bottom = *cfg.bottom;
  if (cfg.top) b.top = *cfg.top;
}

void require_multiple(int nx, int ny, int kx, int ky, const std::string& name) {
  const int k = std::max(kx, ky);
  if (nx % kx != 0 || ny % ky != 0)
    throw ConfigError(name + " needs a resolution divisible by " + std::to_string(k));
}

}  // namespace

Geometry make_geometry(const CaseConfig& cfg, int n) {
  const int nx = n > 0 ? n : cfg.nx;
  const int ny = n > 0 ? n : cfg.ny;
  Geometry geo;
  geo.name = cfg.geometry;

  if (cfg.geometry == "file") {
    geo.mesh = std::make_shared<const MixedDimMesh>(read_mesh_file(cfg.mesh_file));
    return geo;
  }

  const Rectangle unit{0.0, 0.0, 1.0, 1.0};
  FractureSpec fr;
  BoundarySpec bc;
  if (cfg.geometry == "column") {
    require_multiple(nx, ny, 2, 1, cfg.geometry);
    fr.fractures.push_back(segment("fracture", {{0.5, 0.0}, {0.5, 1.0}}));
    bc.left = SideCondition::pressure(1.0);
    bc.right = SideCondition::pressure(0.0);
    geo.default_kappa_perp = 1e4;
  } else if (cfg.geometry == "square") {
    bc.left = SideCondition::pressure(1.0);
    bc.right = SideCondition::pressure(0.0);
  } else if (cfg.geometry == "benchmark2d") {
    require_multiple(nx, ny, 8, 8, cfg.geometry);
    fr.fractures.push_back(segment("crossing_h", {{0.25, 0.75}, {0.75, 0.75}}));
    fr.fractures.push_back(segment("crossing_v", {{0.5, 0.625}, {0.5, 0.875}}));
    fr.fractures.push_back(segment("blocking_left", {{0.0, 0.5}, {0.375, 0.5}}));
    fr.fractures.push_back(segment("blocking_right", {{0.625, 0.375}, {1.0, 0.375}}));
    fr.fractures.push_back(segment("corner", {{0.75, 0.0}, {0.75, 0.25}, {1.0, 0.25}}));
    bc.top = SideCondition::pressure(1.0);
    bc.bottom = SideCondition::pressure(0.0);
    geo.default_kappa_perp = 1e4;
    geo.default_kappa_par = 1.0;
    geo.defaults["blocking_left"] = {1.0, 1e-4, std::nullopt};
    geo.defaults["blocking_right"] = {1.0, 1e-4, std::nullopt};
  } else if (cfg.geometry == "stability2d") {
    require_multiple(nx, ny, 8, 8, cfg.geometry);
    fr.fractures.push_back(segment("blocking_left", {{0.0, 0.5}, {0.375, 0.5}}));
    fr.fractures.push_back(segment("blocking_right", {{0.625, 0.375}, {1.0, 0.375}}));
    fr.fractures.push_back(segment("corner", {{0.75, 0.0}, {0.75, 0.25}, {1.0, 0.25}}));
    bc.top = SideCondition::pressure(1.0);
    bc.bottom = SideCondition::pressure(0.0);
    bc.left = SideCondition::pressure(0.0, 0.0, 1.0);
    bc.right = SideCondition::pressure(0.0, 0.0, 1.0);
  } else {
    throw ConfigError("unknown geometry '" + cfg.geometry + "'");
  }
  apply_sides(cfg, bc);
  geo.mesh = std::make_shared<const MixedDimMesh>(build_structured_mesh(unit, nx, ny, cfg.grid_kind(), fr, bc));
  return geo;
}

ProblemSetup make_setup(const CaseConfig& cfg, const Geometry& geo) {
  const MixedDimMesh& mesh = *geo.mesh;
  ProblemSetup setup;
  setup.method = cfg.method;
  setup.mortar_ratio = cfg.mortar_ratio;
  setup.kappa_threshold = cfg.kappa_threshold;

  struct Resolved {
    double kperp, kpar, source;
  };
  auto resolve = [&](int fracture) {
    Resolved r{geo.default_kappa_perp, geo.default_kappa_par, 0.0};
    std::string name;
    if (fracture >= 0 && fracture < static_cast<int>(mesh.source().fractures.size()))
      name = mesh.source().fractures[static_cast<size_t>(fracture)].name;
    if (auto it = geo.defaults.find(name); it != geo.defaults.end()) {
      if (it->second.kappa_perp) r.kperp = *it->second.kappa_perp;
      if (it->second.kappa_par) r.kpar = *it->second.kappa_par;
      if (it->second.source) r.source = *it->second.source;
    }
    if (cfg.kappa_perp) r.kperp = *cfg.kappa_perp;
    if (cfg.kappa_par) r.kpar = *cfg.kappa_par;
    if (cfg.fracture_source) r.source = *cfg.fracture_source;
    if (auto it = cfg.fractures.find(name); it != cfg.fractures.end()) {
      if (it->second.kappa_perp) r.kperp = *it->second.kappa_perp;
      if (it->second.kappa_par) r.kpar = *it->second.kappa_par;
      if (it->second.source) r.source = *it->second.source;
    }
    return r;
  };

  for (const SubdomainGrid& g : mesh.subdomains()) {
    if (g.dim == 2) {
      setup.params.push_back(SubdomainParams::uniform(g, cfg.kappa_matrix));
    } else if (g.dim == 1) {
      const Resolved r = resolve(g.fracture);
      setup.params.push_back(SubdomainParams::uniform(g, r.kpar, r.source));
    } else {
      setup.params.push_back(SubdomainParams::uniform(g, 1.0));
    }
  }
  for (const InterfacePairing& p : mesh.pairings()) {
    const SubdomainGrid& lower = mesh.subdomain(p.lower);
    if (lower.dim == 1) {
      setup.kappa_perp.push_back(resolve(lower.fracture).kperp);
    } else {
      const double parent = resolve(mesh.subdomain(p.higher).fracture).kperp;
      setup.kappa_perp.push_back(cfg.kappa_perp_point.value_or(parent));
    }
  }
  return setup;
}

}  // namespace mdfc
