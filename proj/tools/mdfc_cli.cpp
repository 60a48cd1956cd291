#include "mdfc/errors.hpp"
#include "mdfc/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>

namespace {

void print_summary(const mdfc::CaseConfig& cfg, const mdfc::CaseResult& r) {
  const auto header = mdfc::summary_header();
  const auto row = mdfc::summary_row(cfg, r);
  for (size_t k = 0; k < header.size(); ++k) std::cout << header[k] << " = " << row[k] << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-dimensional flux-coupled Darcy flow solver"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "solve one case and write summary.csv and VTK fields");
  run->add_option("--config", config, "case configuration file")->required();

  int levels = 0;
  auto* converge = app.add_subcommand("converge", "mortar-flux convergence study against an RT0H reference");
  converge->add_option("--config", config, "case configuration file")->required();
  converge->add_option("--levels", levels, "number of refinement levels (>= 3)")->required();

  std::string kperp, kpar, ratios;
  auto* stability = app.add_subcommand("stability", "smallest eigenvalue of the flux Schur complement");
  stability->add_option("--config", config, "case configuration file")->required();
  stability->add_option("--kperp", kperp, "comma-separated kappa_perp values")->required();
  stability->add_option("--kpar", kpar, "comma-separated kappa_par values")->required();
  stability->add_option("--ratios", ratios, "comma-separated mortar ratios")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  mdfc::CaseConfig cfg;
  try {
    cfg = mdfc::read_config(config);
  } catch (const mdfc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (*run) {
      const auto r = mdfc::run_case(cfg);
      print_summary(cfg, r);
    } else if (*converge) {
      if (levels < 3) {
        std::cerr << "error: --levels must be at least 3\n";
        return 2;
      }
      std::vector<int> lv = cfg.levels;
      if (lv.empty()) lv.push_back(cfg.nx);
      while (static_cast<int>(lv.size()) < levels) lv.push_back(lv.back() * 2);
      lv.resize(static_cast<size_t>(levels));
      const auto t = mdfc::convergence_study(cfg, lv);
      std::cout << "reference n = " << t.reference_n << '\n';
      for (const auto& r : t.rows)
        std::cout << "n = " << r.n << "  error_1d = " << r.error.dim1 << "  error_0d = " << r.error.dim0
                  << "  rate_1d = " << r.rate1 << '\n';
    } else if (*stability) {
      const auto rows = mdfc::stability_sweep(cfg, mdfc::parse_number_list(kperp), mdfc::parse_number_list(kpar),
                                              mdfc::parse_number_list(ratios));
      for (const auto& r : rows)
        std::cout << "kappa_perp = " << r.kappa_perp << "  kappa_par = " << r.kappa_par << "  ratio = " << r.outer_ratio
                  << "  n_min = " << r.n_min << '\n';
    }
  } catch (const mdfc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
