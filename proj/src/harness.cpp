#include "mdfc/harness.hpp"

#include "mdfc/errors.hpp"
#include "mdfc/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <tuple>

namespace mdfc {

using linalg::Vector;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& row : rows) {
    for (size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
    out << '\n';
  }
}

namespace {

const char* grid_name(GridKind k) { return k == GridKind::CartesianQuads ? "quads" : "triangles"; }

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace

std::vector<std::string> summary_header() {
  return {"geometry",         "method",           "grid",          "nx",
          "ny",               "mortar_ratio",     "kappa_matrix",  "kappa_perp",
          "kappa_par",        "subdomains",       "mortar_dofs",   "residual",
          "boundary_inflow",  "boundary_outflow", "total_sink",    "global_imbalance",
          "max_cell_imbalance", "flux_scale",     "interface_law_residual"};
}

std::vector<std::string> summary_row(const CaseConfig& cfg, const CaseResult& r) {
  const Diagnostics& d = r.diagnostics;
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("default"); };
  return {cfg.geometry,
          to_string(cfg.method),
          grid_name(cfg.grid_kind()),
          std::to_string(cfg.nx),
          std::to_string(cfg.ny),
          format_number(cfg.mortar_ratio),
          format_number(cfg.kappa_matrix),
          opt(cfg.kappa_perp),
          opt(cfg.kappa_par),
          std::to_string(r.geometry.mesh->size()),
          std::to_string(r.disc->num_mortar()),
          format_number(r.solution.residual),
          format_number(d.boundary_inflow),
          format_number(d.boundary_outflow),
          format_number(d.total_sink),
          format_number(d.global_imbalance),
          format_number(d.max_cell_imbalance),
          format_number(d.flux_scale),
          format_number(d.interface_law_residual)};
}

CaseResult run_case(const CaseConfig& cfg, bool write, int n) {
  CaseResult r;
  r.geometry = make_geometry(cfg, n);
  r.disc = std::make_unique<Discretization>(discretize(*r.geometry.mesh, make_setup(cfg, r.geometry)));
  r.solution = solve_global(*r.disc);
  r.diagnostics = compute_diagnostics(*r.disc, r.solution);
  if (write) {
    ensure_dir(cfg.output);
    CaseConfig shown = cfg;
    if (n > 0) shown.nx = shown.ny = n;
    write_csv(join(cfg.output, "summary.csv"), {summary_header(), summary_row(shown, r)});
    write_vtk(cfg.output, *r.disc, r.solution);
  }
  return r;
}

double p0_l2_difference(const std::vector<double>& ba, const std::vector<double>& va, const std::vector<double>& bb,
                        const std::vector<double>& vb) {
  if (ba.size() != va.size() + 1 || bb.size() != vb.size() + 1 || va.empty() || vb.empty())
    throw std::invalid_argument("P0 fields need one value per interval");
  if (std::abs(ba.front() - bb.front()) > 1e-9 || std::abs(ba.back() - bb.back()) > 1e-9 * std::max(1.0, ba.back()))
    throw InterfaceMismatch("P0 fields cover different intervals");
  double sum = 0.0;
  size_t i = 0, j = 0;
  double x = ba.front();
  while (i < va.size() && j < vb.size()) {
    const double next = std::min(ba[i + 1], bb[j + 1]);
    const double diff = va[i] - vb[j];
    if (next > x) sum += (next - x) * diff * diff;
    x = next;
    if (ba[i + 1] <= next) ++i;
    if (j < vb.size() && bb[j + 1] <= next) ++j;
  }
  return std::sqrt(sum);
}

MortarError mortar_l2_error(const Discretization& da, const Solution& sa, const Discretization& db,
                            const Solution& sb) {
  using Key = std::tuple<std::string, std::string, int>;
  auto key = [](const Discretization& d, const MortarInterface& m) {
    return Key{d.mesh->subdomain(m.lower).name, d.mesh->subdomain(m.higher).name, m.side};
  };
  std::map<Key, int> index_b;
  for (const MortarInterface& m : db.mortars) index_b[key(db, m)] = m.id;
  if (index_b.size() != da.mortars.size()) throw InterfaceMismatch("solutions have different interface sets");

  double e1 = 0.0, e0 = 0.0;
  for (const MortarInterface& ma : da.mortars) {
    auto it = index_b.find(key(da, ma));
    if (it == index_b.end())
      throw InterfaceMismatch("interface " + std::get<0>(key(da, ma)) + " / " + std::get<1>(key(da, ma)) +
                              " has no counterpart");
    const MortarInterface& mb = db.mortars[static_cast<size_t>(it->second)];
    const Vector& la = sa.lambda[static_cast<size_t>(ma.id)];
    const Vector& lb = sb.lambda[static_cast<size_t>(mb.id)];
    if (ma.lower_dim == 0) {
      const double diff = la(0) - lb(0);
      e0 += diff * diff;
      continue;
    }
    std::vector<double> va(la.data(), la.data() + la.size());
    std::vector<double> vb(lb.data(), lb.data() + lb.size());
    std::vector<double> bb = mb.breaks;
    const SubdomainGrid& ga = da.mesh->subdomain(ma.lower);
    const SubdomainGrid& gb = db.mesh->subdomain(mb.lower);
    if ((ga.nodes.front() - gb.nodes.front()).norm() > (ga.nodes.front() - gb.nodes.back()).norm()) {
      // reversed chain direction
      const double length = bb.back();
      std::reverse(bb.begin(), bb.end());
      for (double& s : bb) s = length - s;
      std::reverse(vb.begin(), vb.end());
    }
    const double e = p0_l2_difference(ma.breaks, va, bb, vb);
    e1 += e * e;
  }
  return {std::sqrt(e1), std::sqrt(e0)};
}

ConvergenceTable convergence_study(const CaseConfig& cfg, const std::vector<int>& levels, bool write) {
  if (levels.size() < 3) throw ConfigError("a convergence study needs at least three levels");
  for (size_t k = 1; k < levels.size(); ++k)
    if (levels[k] <= levels[k - 1]) throw ConfigError("levels must increase");
  if (cfg.reference_factor < 4) throw ConfigError("reference_factor must be at least 4");
  ConvergenceTable table;
  table.reference_n = levels.back() * cfg.reference_factor;

  CaseConfig ref_cfg = cfg;
  ref_cfg.method = Method::RT0H;
  ref_cfg.grid = GridKind::StructuredTriangles;
  const CaseResult ref = run_case(ref_cfg, false, table.reference_n);

  std::vector<CaseResult> runs(levels.size());
  parallel_for(static_cast<int>(levels.size()),
               [&](int k) { runs[static_cast<size_t>(k)] = run_case(cfg, false, levels[static_cast<size_t>(k)]); });
  for (size_t k = 0; k < levels.size(); ++k) {
    ConvergenceRow row;
    row.n = levels[k];
    row.h = 1.0 / levels[k];
    row.error = mortar_l2_error(*runs[k].disc, runs[k].solution, *ref.disc, ref.solution);
    row.rate1 = row.rate0 = std::numeric_limits<double>::quiet_NaN();
    if (k > 0) {
      const ConvergenceRow& prev = table.rows.back();
      const double scale = std::log2(row.h / prev.h);
      row.rate1 = std::log2(row.error.dim1 / prev.error.dim1) / scale;
      row.rate0 = std::log2(row.error.dim0 / prev.error.dim0) / scale;
    }
    table.rows.push_back(row);
  }

  if (write) {
    ensure_dir(cfg.output);
    std::vector<std::vector<std::string>> rows = {{"geometry", "method", "grid", "n", "h", "mortar_ratio",
                                                   "reference_n", "error_1d", "error_0d", "rate_1d", "rate_0d"}};
    for (const ConvergenceRow& r : table.rows)
      rows.push_back({cfg.geometry, to_string(cfg.method), grid_name(cfg.grid_kind()), std::to_string(r.n),
                      format_number(r.h), format_number(cfg.mortar_ratio), std::to_string(table.reference_n),
                      format_number(r.error.dim1), format_number(r.error.dim0), format_number(r.rate1),
                      format_number(r.rate0)});
    write_csv(join(cfg.output, "convergence.csv"), rows);
  }
  return table;
}

double schur_min_eigenvalue(const Discretization& disc) {
  const SchurSystem s = assemble_schur(disc);
  if (s.num_mortar() == 0) return std::numeric_limits<double>::quiet_NaN();
  return linalg::min_eigenvalue_sym(s.s).value;
}

std::vector<StabilityRow> stability_sweep(const CaseConfig& cfg, const std::vector<double>& kperp,
                                          const std::vector<double>& kpar, const std::vector<double>& ratios,
                                          bool write) {
  for (double k : kperp)
    if (!(k > 0.0)) throw DegenerateKappaPerp("stability sweep needs positive kappa_perp values");
  if (kperp.empty() || kpar.empty() || ratios.empty()) throw ConfigError("stability sweep needs non-empty grids");
  const Geometry geo = make_geometry(cfg);

  std::vector<StabilityRow> rows;
  for (double r : ratios)
    for (double kp : kperp)
      for (double kt : kpar) rows.push_back({cfg.method, kp, kt, r, r, 0.0});

  parallel_for(static_cast<int>(rows.size()), [&](int k) {
    StabilityRow& row = rows[static_cast<size_t>(k)];
    CaseConfig c = cfg;
    c.kappa_perp = row.kappa_perp;
    c.kappa_par = row.kappa_par;
    c.fractures.clear();
    c.mortar_ratio = row.outer_ratio;
    const Discretization d = discretize(*geo.mesh, make_setup(c, geo));
    row.n_min = schur_min_eigenvalue(d);
  });

  if (write) {
    ensure_dir(cfg.output);
    std::vector<std::vector<std::string>> out = {{"geometry", "method", "grid", "n", "kappa_perp", "kappa_par",
                                                  "outer_ratio", "inner_ratio", "n_min"}};
    for (const StabilityRow& r : rows)
      out.push_back({cfg.geometry, to_string(r.method), grid_name(cfg.grid_kind()), std::to_string(cfg.nx),
                     format_number(r.kappa_perp), format_number(r.kappa_par), format_number(r.outer_ratio),
                     format_number(r.inner_ratio), format_number(r.n_min)});
    write_csv(join(cfg.output, "stability.csv"), out);
  }
  return rows;
}

}  // namespace mdfc
