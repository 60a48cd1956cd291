#include "mdfc/errors.hpp"
#include "mdfc/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace mdfc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mdfc_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Config, ParsesSections) {
  const CaseConfig c = parse_config(R"(
# comment
[case]
geometry = benchmark2d
method = p1
n = 16
mortar_ratio = 0.5   # trailing
[matrix]
kappa = 2
[fractures]
kappa_perp = 1e3
kappa_perp_point = 5
[fracture.corner]
kappa_par = 1e-4
source = 0.25
[boundary]
left = dirichlet 0 0 1
right = neumann -0.5
[convergence]
levels = 8, 16, 32
[stability]
kperp = 1e-2, 1, 1e2
ratios = 0.5 0.75
)");
  EXPECT_EQ(c.geometry, "benchmark2d");
  EXPECT_EQ(c.method, Method::P1);
  EXPECT_EQ(c.nx, 16);
  EXPECT_EQ(c.ny, 16);
  EXPECT_DOUBLE_EQ(c.mortar_ratio, 0.5);
  EXPECT_DOUBLE_EQ(c.kappa_matrix, 2.0);
  EXPECT_DOUBLE_EQ(*c.kappa_perp, 1e3);
  EXPECT_DOUBLE_EQ(*c.kappa_perp_point, 5.0);
  EXPECT_FALSE(c.kappa_par);
  EXPECT_DOUBLE_EQ(*c.fractures.at("corner").kappa_par, 1e-4);
  EXPECT_DOUBLE_EQ(*c.fractures.at("corner").source, 0.25);
  ASSERT_TRUE(c.left);
  EXPECT_TRUE(c.left->dirichlet);
  EXPECT_FALSE(c.right->dirichlet);
  EXPECT_EQ(c.levels, (std::vector<int>{8, 16, 32}));
  EXPECT_EQ(c.kperp_grid, (std::vector<double>{1e-2, 1.0, 1e2}));
  EXPECT_EQ(c.ratio_grid, (std::vector<double>{0.5, 0.75}));
  EXPECT_EQ(c.grid_kind(), GridKind::StructuredTriangles);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("[case]\nmethod = mpfa\n"), ConfigError);
  EXPECT_THROW(parse_config("[bogus]\n"), ConfigError);
  EXPECT_THROW(parse_config("[case]\ncolour = red\n"), ConfigError);
  EXPECT_THROW(parse_config("[matrix]\nkappa = abc\n"), ConfigError);
  EXPECT_THROW(parse_config("[boundary]\nleft = robin 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[case]\ngeometry = file\n"), ConfigError);
  EXPECT_THROW(parse_number_list("1, x"), ConfigError);
  EXPECT_THROW(read_config("/nonexistent/case.cfg"), ConfigError);
}

TEST(Geometry, ResolutionChecks) {
  CaseConfig c;
  c.geometry = "benchmark2d";
  c.nx = c.ny = 12;
  EXPECT_THROW(make_geometry(c), ConfigError);
  c.geometry = "column";
  c.nx = 3;
  EXPECT_THROW(make_geometry(c), ConfigError);
  c.geometry = "nowhere";
  c.nx = 4;
  EXPECT_THROW(make_geometry(c), ConfigError);
}

TEST(Setup, ParameterPrecedence) {
  CaseConfig c;
  c.geometry = "benchmark2d";
  c.nx = c.ny = 16;
  c.kappa_par = 3.0;
  c.fractures["corner"].kappa_par = 7.0;
  const Geometry g = make_geometry(c);
  const ProblemSetup s = make_setup(c, g);
  for (const SubdomainGrid& sg : g.mesh->subdomains()) {
    if (sg.dim != 1) continue;
    const double k = s.params[static_cast<size_t>(sg.id)].kappa.front();
    EXPECT_DOUBLE_EQ(k, sg.name.rfind("corner", 0) == 0 ? 7.0 : 3.0) << sg.name;
  }
  CaseConfig d = c;
  d.kappa_par.reset();
  d.fractures.clear();
  const ProblemSetup s2 = make_setup(d, g);
  for (const SubdomainGrid& sg : g.mesh->subdomains())
    if (sg.dim == 1 && sg.name.rfind("blocking", 0) == 0)
      EXPECT_DOUBLE_EQ(s2.params[static_cast<size_t>(sg.id)].kappa.front(), 1e-4);
}

TEST(MortarNorm, P0Differences) {
  EXPECT_DOUBLE_EQ(p0_l2_difference({0, 0.5, 1}, {1, 2}, {0, 0.5, 1}, {1, 2}), 0.0);
  EXPECT_NEAR(p0_l2_difference({0, 1}, {0.0}, {0, 0.25, 1}, {0.5, 0.5}), 0.5, 1e-15);
  // (1, 0) on halves against 0.5: sqrt(0.5 * 0.25 + 0.5 * 0.25)
  EXPECT_NEAR(p0_l2_difference({0, 0.5, 1}, {1, 0}, {0, 1}, {0.5}), 0.5, 1e-15);
  // independent: overlapping refinement by hand
  const double e = p0_l2_difference({0, 0.3, 1}, {2, -1}, {0, 0.6, 1}, {1, 1});
  EXPECT_NEAR(e, std::sqrt(0.3 * 1.0 + 0.7 * 4.0), 1e-14);
}

TEST(MortarNorm, SelfAndMismatch) {
  CaseConfig c;
  c.geometry = "benchmark2d";
  c.method = Method::RT0H;
  c.nx = c.ny = 16;
  const CaseResult a = run_case(c, false);
  const MortarError self = mortar_l2_error(*a.disc, a.solution, *a.disc, a.solution);
  EXPECT_EQ(self.dim1, 0.0);
  EXPECT_EQ(self.dim0, 0.0);
  CaseConfig s = c;
  s.geometry = "stability2d";
  const CaseResult b = run_case(s, false);
  EXPECT_THROW(mortar_l2_error(*a.disc, a.solution, *b.disc, b.solution), InterfaceMismatch);
}

TEST(RunCase, ColumnFlux) {
  CaseConfig c;
  c.geometry = "column";
  c.kappa_perp = 1.0;
  c.nx = c.ny = 4;
  const fs::path dir = scratch("column");
  c.output = dir.string();
  const CaseResult r = run_case(c);
  EXPECT_NEAR(r.diagnostics.boundary_outflow, 1.0 / 3.0, 1e-12);
  EXPECT_TRUE(fs::exists(dir / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir / "mortars.vtk"));
  EXPECT_TRUE(fs::exists(dir / "fields_0.vtk"));
}

TEST(RunCase, BenchmarkResidual) {
  CaseConfig c;
  c.geometry = "benchmark2d";
  c.method = Method::RT0H;
  c.nx = c.ny = 32;
  const CaseResult r = run_case(c, false);
  EXPECT_LT(r.solution.residual, 1e-9);
  EXPECT_LE(std::abs(r.diagnostics.global_imbalance), 1e-9 * r.diagnostics.flux_scale);
}

TEST(RunCase, DeterministicOutput) {
  CaseConfig c;
  c.geometry = "benchmark2d";
  c.method = Method::P1;
  c.nx = c.ny = 16;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  c.output = a.string();
  run_case(c);
  c.output = b.string();
  run_case(c);
  for (const char* f : {"mortars.vtk", "fields_2.vtk"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Convergence, TableShape) {
  CaseConfig c;
  c.geometry = "benchmark2d";
  c.method = Method::TPFA;
  c.reference_factor = 4;
  const ConvergenceTable t = convergence_study(c, {8, 16, 32}, false);
  EXPECT_EQ(t.reference_n, 128);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_TRUE(std::isnan(t.rows[0].rate1));
  for (const auto& row : t.rows) EXPECT_GT(row.error.dim1, 0.0);
  EXPECT_LT(t.rows[2].error.dim1, t.rows[0].error.dim1);
  EXPECT_THROW(convergence_study(c, {8, 16}, false), ConfigError);
}

TEST(Stability, PositiveEigenvalues) {
  CaseConfig c;
  c.geometry = "stability2d";
  c.nx = c.ny = 16;
  for (Method m : {Method::TPFA, Method::P1, Method::RT0H}) {
    c.method = m;
    const auto rows = stability_sweep(c, {1e-2, 1.0}, {1e-2, 1.0}, {0.5}, false);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& r : rows) {
      EXPECT_GT(r.n_min, 0.0) << to_string(m);
      EXPECT_DOUBLE_EQ(r.outer_ratio, 0.5);
    }
  }
  EXPECT_THROW(stability_sweep(c, {0.0}, {1.0}, {0.5}, false), DegenerateKappaPerp);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  const fs::path bad = dir / "bad.cfg";
  std::ofstream(bad) << "[case]\nmethod = mpfa\n";
  const std::string cli = MDFC_CLI_PATH;
  int rc = std::system((cli + " run --config " + bad.string() + " > /dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(rc), 2);
  rc = std::system((cli + " frobnicate > /dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(rc), 2);

  const fs::path good = dir / "good.cfg";
  std::ofstream(good) << "[case]\ngeometry = column\nn = 4\noutput = " << (dir / "out").string() << "\n";
  rc = std::system((cli + " run --config " + good.string() + " > /dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(rc), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "summary.csv"));
}
