#pragma once

/// @file harness.hpp
/// @brief Case configuration, builtin geometries, single runs, convergence
/// studies, stability sweeps and mortar error norms.

#include "mdfc/assembly.hpp"
#include "mdfc/disc.hpp"
#include "mdfc/mesh.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mdfc {

struct FractureOverride {
  std::optional<double> kappa_perp;
  std::optional<double> kappa_par;
  /// Sink per unit length.
  std::optional<double> source;
};

struct CaseConfig {
  /// column | benchmark2d | stability2d | square | file
  std::string geometry = "column";
  std::string mesh_file;
  Method method = Method::TPFA;
  /// Defaults to quads for tpfa and triangles otherwise.
  std::optional<GridKind> grid;
  int nx = 8;
  int ny = 8;
  double mortar_ratio = 0.75;
  double kappa_threshold = 0.0;

  double kappa_matrix = 1.0;
  std::optional<double> kappa_perp;
  std::optional<double> kappa_par;
  std::optional<double> fracture_source;
  /// Override for interfaces between fractures and intersection points.
  std::optional<double> kappa_perp_point;
  std::map<std::string, FractureOverride> fractures;

  std::optional<SideCondition> left, right, bottom, top;

  std::vector<int> levels;
  int reference_factor = 4;
  std::vector<double> kperp_grid, kpar_grid, ratio_grid;

  std::string output = "out";
  unsigned seed = 1;

  GridKind grid_kind() const;
};

/// Sectioned key = value text ([case], [matrix], [fractures],
/// [fracture.NAME], [boundary], [convergence], [stability]); '#' starts a
/// comment. Unknown sections or keys raise ConfigError.
CaseConfig parse_config(const std::string& text);
CaseConfig read_config(const std::string& path);

/// "1e-4, 1e-3" -> {1e-4, 1e-3}. Throws ConfigError.
std::vector<double> parse_number_list(const std::string& text);

struct Geometry {
  std::string name;
  std::shared_ptr<const MixedDimMesh> mesh;
  /// Per-fracture parameter defaults of the builtin.
  std::map<std::string, FractureOverride> defaults;
  double default_kappa_perp = 1.0;
  double default_kappa_par = 1.0;
};

/// Builtin geometries live on the unit square; benchmark2d and stability2d
/// need resolutions divisible by 8. n > 0 overrides nx and ny.
Geometry make_geometry(const CaseConfig& cfg, int n = 0);

/// Per-subdomain and per-interface parameters for a geometry.
ProblemSetup make_setup(const CaseConfig& cfg, const Geometry& geo);

struct CaseResult {
  Geometry geometry;
  std::unique_ptr<Discretization> disc;
  Solution solution;
  Diagnostics diagnostics;
};

/// Solve one case with the monolithic system. Writes summary.csv and VTK
/// fields into cfg.output when write is set.
CaseResult run_case(const CaseConfig& cfg, bool write = true, int n = 0);

/// Summary row (header first) for a finished case.
std::vector<std::string> summary_header();
std::vector<std::string> summary_row(const CaseConfig& cfg, const CaseResult& r);

struct MortarError {
  double dim1 = 0.0;
  double dim0 = 0.0;
};

/// sqrt(sum measure * (a - b)^2) over the common refinement of two P0
/// fields on [0, L] given by their breakpoints.
double p0_l2_difference(const std::vector<double>& breaks_a, const std::vector<double>& values_a,
                        const std::vector<double>& breaks_b, const std::vector<double>& values_b);

/// Mortar L2 error per interface dimension. Interfaces are matched by the
/// names of their lower and higher subdomains and the side. Throws
/// InterfaceMismatch when the sets differ.
MortarError mortar_l2_error(const Discretization& disc, const Solution& sol, const Discretization& ref,
                            const Solution& ref_sol);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  MortarError error;
  /// log2(e_prev / e) against the previous row; NaN on the first.
  double rate1 = 0.0;
  double rate0 = 0.0;
};

struct ConvergenceTable {
  int reference_n = 0;
  std::vector<ConvergenceRow> rows;
};

/// Errors of cfg.method on the given levels against an RT0H reference on a
/// reference_factor times finer grid. Writes convergence.csv when write is set.
ConvergenceTable convergence_study(const CaseConfig& cfg, const std::vector<int>& levels, bool write = true);

struct StabilityRow {
  Method method = Method::TPFA;
  double kappa_perp = 0.0;
  double kappa_par = 0.0;
  double outer_ratio = 0.0;
  double inner_ratio = 0.0;
  double n_min = 0.0;
};

/// Smallest eigenvalue of the flux Schur complement for every parameter
/// tuple. Writes stability.csv when write is set.
std::vector<StabilityRow> stability_sweep(const CaseConfig& cfg, const std::vector<double>& kperp,
                                          const std::vector<double>& kpar, const std::vector<double>& ratios,
                                          bool write = true);

/// Smallest eigenvalue of S for one discretization.
double schur_min_eigenvalue(const Discretization& disc);

/// Legacy ASCII VTK: fields_<id>.vtk per subdomain (cell pressure) and
/// mortars.vtk (mortar flux per interface cell).
void write_vtk(const std::string& directory, const Discretization& disc, const Solution& sol);

/// Write rows as CSV (values are written verbatim).
void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace mdfc
