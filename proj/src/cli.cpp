#include "polar_rsma/cli.hpp"

#include "polar_rsma/config.hpp"
#include "polar_rsma/csv.hpp"
#include "polar_rsma/errors.hpp"
#include "polar_rsma/montecarlo.hpp"
#include "polar_rsma/scenario.hpp"
#include "polar_rsma/validate.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace polar_rsma {

namespace {

struct Options {
  std::string config_path;
  std::string preset;
  std::uint64_t seed = 271828;
  long long trials = 100000;
  std::string out_path;
};

std::string join(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path,
                  "configuration file (key = value lines)");
  sub->add_option("--preset", o.preset,
                  "named preset: " + join(preset_names()));
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--trials", o.trials, "Monte Carlo trials per grid point");
  sub->add_option("--out", o.out_path, "output file path");
}

// Preset first, then the config file on top of it, then flag overrides.
SystemConfig resolve_config(const CLI::App* sub, const Options& o) {
  SystemConfig cfg;
  if (!o.preset.empty()) cfg = preset_config(o.preset);
  if (!o.config_path.empty()) cfg = load_config(o.config_path, cfg);
  if (sub->count("--seed") > 0) cfg.master_seed = o.seed;
  if (sub->count("--trials") > 0) cfg.trials = o.trials;
  cfg.validate();
  return cfg;
}

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

double first_or(const std::vector<double>& grid, double scalar) {
  return grid.empty() ? scalar : grid.front();
}

int report_failures(const std::vector<ResultRow>& rows) {
  int failed = 0;
  for (const auto& row : rows) {
    if (!row.failed) continue;
    ++failed;
    std::cerr << "error: " << row.scheme << " snr=" << row.snr_db
              << " chi=" << row.chi << " xi=" << row.xi
              << " user=" << row.user << ": " << row.error << "\n";
  }
  return failed;
}

int write_rows(const std::vector<ResultRow>& rows, const std::string& path) {
  if (path.empty()) {
    write_csv(std::cout, rows);
  } else {
    std::ofstream out(path);
    if (!out) {
      std::cerr << "error: cannot open output file '" << path << "'\n";
      return 1;
    }
    write_csv(out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << path << "\n";
  }
  return 0;
}

int cmd_simulate(const CLI::App* sub, const Options& o) {
  const SystemConfig cfg = resolve_config(sub, o);
  const Scene scene = build_scene(cfg);
  SweepSpec spec = sweep_from_config(cfg);
  spec.snr_grid_db = {spec.snr_grid_db.front()};
  spec.chi_grid = {spec.chi_grid.front()};
  spec.xi_grid = {spec.xi_grid.front()};
  const auto rows = run_sweep(scene, spec);
  for (const auto& row : rows) {
    if (row.failed) continue;
    std::ostringstream os;
    os << row.scheme << " snr=" << fmt("%g", row.snr_db)
       << " chi=" << fmt("%g", row.chi) << " xi=" << fmt("%g", row.xi)
       << " user=" << row.user << "  outage=" << fmt("%.6g", row.outage_mc)
       << " se=" << fmt("%.3g", row.outage_se);
    if (row.outage_cf) os << " cf=" << fmt("%.6g", *row.outage_cf);
    os << "  rate=" << fmt("%.6g", row.erg_mc)
       << " se=" << fmt("%.3g", row.erg_se);
    if (row.erg_cf) os << " cf=" << fmt("%.6g", *row.erg_cf);
    std::cout << os.str() << "\n";
  }
  if (!o.out_path.empty()) {
    const int rc = write_rows(rows, o.out_path);
    if (rc != 0) return rc;
  }
  return report_failures(rows) > 0 ? 1 : 0;
}

int cmd_analytic(const CLI::App* sub, const Options& o) {
  const SystemConfig cfg = resolve_config(sub, o);
  const Scene scene = build_scene(cfg);
  const double snr_db = first_or(cfg.snr_grid_db, cfg.snr_db);
  const double chi = first_or(cfg.chi_grid, cfg.chi);
  const AnalyticPoint pt = analytic_point(scene, snr_db, chi);

  std::ostringstream os;
  for (std::size_t u = 0; u < pt.outage_common.size(); ++u)
    os << "outage_common_user" << u + 1 << " = "
       << fmt("%.17g", pt.outage_common[u]) << "\n";
  for (std::size_t u = 0; u < pt.outage_private.size(); ++u)
    os << "outage_private_user" << u + 1 << " = "
       << fmt("%.17g", pt.outage_private[u]) << "\n";
  double erg_private_sum = 0;
  for (double e : pt.erg_private) erg_private_sum += e;
  os << "erg_common = " << fmt("%.17g", pt.erg_common) << "\n";
  os << "erg_private = " << fmt("%.17g", erg_private_sum) << "\n";

  if (o.out_path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream out(o.out_path);
    if (!out) {
      std::cerr << "error: cannot open output file '" << o.out_path << "'\n";
      return 1;
    }
    out << os.str();
  }
  return 0;
}

int cmd_sweep(const CLI::App* sub, const Options& o) {
  const SystemConfig cfg = resolve_config(sub, o);
  const Scene scene = build_scene(cfg);
  const SweepSpec spec = sweep_from_config(cfg);
  const auto rows = run_sweep(scene, spec);
  const int rc = write_rows(rows, o.out_path);
  if (rc != 0) return rc;
  return report_failures(rows) > 0 ? 1 : 0;
}

int cmd_validate(const CLI::App* sub, const Options& o) {
  const SystemConfig cfg = resolve_config(sub, o);
  const auto results = run_validation(cfg.master_seed);
  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::cout << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " ("
              << r.detail << ")\n";
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "Dual-polarized rate-splitting downlink: closed-form outage and "
      "ergodic-rate analysis with Monte Carlo validation"};
  app.require_subcommand(1);

  Options o_sim, o_an, o_sw, o_va;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Monte Carlo estimates at the first grid point");
  add_common(sim, o_sim);
  CLI::App* an = app.add_subcommand(
      "analytic", "closed-form outage and ergodic rates at the first point");
  add_common(an, o_an);
  CLI::App* sw = app.add_subcommand(
      "sweep", "full grid sweep, CSV output");
  add_common(sw, o_sw);
  CLI::App* va = app.add_subcommand(
      "validate", "self-validation suites against independent oracles");
  add_common(va, o_va);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim, o_sim);
    if (an->parsed()) return cmd_analytic(an, o_an);
    if (sw->parsed()) return cmd_sweep(sw, o_sw);
    if (va->parsed()) return cmd_validate(va, o_va);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace polar_rsma
