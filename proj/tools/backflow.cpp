// backflow: prepare, analyse and sweep backflow scenarios from JSON configs
// or shipped presets.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "backflow/errors.hpp"
#include "backflow/scenario.hpp"
#include "backflow/version.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitPipeline = 3;

struct Common {
  std::string config;
  std::string preset;
  std::string out_dir;
  std::size_t grid_points = 0;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c, bool outputs) {
  auto* cfg = cmd->add_option("--config", c.config, "JSON scenario file");
  auto* pre = cmd->add_option("--preset", c.preset, "shipped preset name (see `backflow presets`)");
  cfg->excludes(pre);
  cmd->add_option("--grid-points", c.grid_points, "override the number of grid points (odd)");
  if (outputs) {
    cmd->add_option("--out-dir", c.out_dir, "directory for report and profile files");
    cmd->add_option("--threads", c.threads, "worker threads, 0 for all cores");
  }
}

backflow::ScenarioConfig resolve(const Common& c) {
  if (c.config.empty() && c.preset.empty()) {
    throw backflow::ValidationError("--config", "give either --config FILE or --preset NAME");
  }
  backflow::ScenarioConfig cfg = c.preset.empty() ? backflow::load_config(c.config) : backflow::preset(c.preset);
  if (c.grid_points != 0) cfg.grid_points = c.grid_points;
  cfg.validate();
  return cfg;
}

backflow::RunOptions run_options(const Common& c) {
  backflow::RunOptions o;
  if (!c.out_dir.empty()) o.out_dir = c.out_dir;
  o.threads = c.threads;
  return o;
}

void print_encounter(const backflow::PreparedScenario& p) {
  const auto& g = p.geometry;
  const double hbar_over_m = backflow::constants::hbar / g.mass;
  std::printf("encounter   T_f = %.9g s, x_c = %.9g m\n", g.time, g.center.value());
  std::printf("velocities  free %.6g m/s, pulsed %.6g m/s, difference %.6g m/s\n", g.k_free * hbar_over_m,
              g.k_pulsed * hbar_over_m, g.q * hbar_over_m);
  std::printf("grid        %zu points, spacing %.4g m, half width %.4g m\n", p.state.grid.n_points(),
              p.state.grid.spacing(), p.state.grid.half_width());
}

int cmd_run(const Common& c) {
  const auto out = backflow::run_scenario(resolve(c), run_options(c));
  print_encounter(out.prepared);
  const auto& r = out.report;
  std::printf("backflow    rate %.6g m/s over %zu intervals, min flux %.6g 1/s\n", r.backflow_rate,
              r.backflow_interval_count, r.max_negative_flux);
  std::printf("fractions   rho_crit max %.4f%%, density min %.4f%%\n", 100.0 * r.rho_crit_max_fraction,
              100.0 * r.density_min_fraction);
  std::printf("spectrum    negative weight %.3g\n", out.spectrum.negative_weight);
  for (const auto& path : out.written) std::printf("wrote       %s\n", path.c_str());
  return 0;
}

int cmd_sweep(const Common& c) {
  const auto out = backflow::run_sweep(resolve(c), run_options(c));
  print_encounter(out.prepared);
  const auto& r = out.result;
  std::printf("sweep       %s, %zu samples, max rate %.6g m/s at %.6g (refined %.6g)\n",
              backflow::to_string(r.variable).c_str(), r.samples.size(), r.max_backflow_rate, r.argmax_value,
              r.refined_argmax);
  for (const auto& path : out.written) std::printf("wrote       %s\n", path.c_str());
  return 0;
}

int cmd_validate(const Common& c) {
  const auto prepared = backflow::prepare_scenario(resolve(c));
  std::printf("configuration ok: %zu LMT pulses\n", prepared.sequence.lmt.size());
  print_encounter(prepared);
  return 0;
}

int cmd_presets(const std::string& show) {
  if (!show.empty()) {
    std::cout << backflow::config_to_json(backflow::preset(show)) << "\n";
    return 0;
  }
  for (const auto& p : backflow::list_presets()) std::printf("%-14s %s\n", p.name.c_str(), p.description.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum backflow in large-momentum-transfer atom interferometry"};
  app.set_version_flag("--version", std::string(backflow::kVersion));
  app.require_subcommand(1);

  Common run_args, sweep_args, validate_args;
  std::string show;
  auto* run = app.add_subcommand("run", "evaluate one scenario and write its report");
  add_common(run, run_args, true);
  auto* sweep = app.add_subcommand("sweep", "sweep the splitting pulse area or the real arm weights");
  add_common(sweep, sweep_args, true);
  auto* validate = app.add_subcommand("validate", "check a configuration and solve its encounter");
  add_common(validate, validate_args, false);
  auto* presets = app.add_subcommand("presets", "list shipped presets");
  presets->add_option("--show", show, "print the configuration of one preset as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*validate) return cmd_validate(validate_args);
    return cmd_presets(show);
  } catch (const backflow::ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const backflow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
}
