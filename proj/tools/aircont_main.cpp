#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aircont/config.hpp"
#include "aircont/csv.hpp"
#include "aircont/montecarlo.hpp"
#include "aircont/simulate.hpp"
#include "aircont/stability.hpp"
#include "aircont/validate.hpp"

namespace {

using namespace aircont;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;  // 0 = hardware count
};

void add_common(CLI::App* cmd, CommonOptions& opts, const std::string& out_default) {
  cmd->add_option("--config", opts.config_path,
                  "Config file (JSON); omit for built-in defaults. A run "
                  "manifest is also accepted.");
  cmd->add_option("--out", opts.out_path, "Output CSV path")
      ->default_val(out_default);
  cmd->add_option("--seed", opts.seed,
                  "Override the config seeds (sweep and sim)")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--threads", opts.threads,
                  "Worker threads; 0 = hardware count. Never changes output "
                  "bytes.");
}

ToolConfig load(const CommonOptions& opts) {
  std::optional<std::uint64_t> seed;
  if (opts.seed_set) seed = opts.seed;
  if (opts.config_path.empty()) return default_config(seed);
  return load_config_file(opts.config_path, seed);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file " + path);
  return out;
}

int run_stability(const CommonOptions& opts) {
  const ToolConfig cfg = load(opts);
  const auto cells = sweep_stability(make_grid_spec(cfg), opts.threads);

  auto out = open_output(opts.out_path);
  write_stability_csv(out, cells);
  write_manifest(opts.out_path + ".manifest.json", "stability", cfg,
                 {opts.out_path});

  const RegionArea max_area = region_area(cells, RegionKind::max_stable);
  const RegionArea air = region_area(cells, RegionKind::achievable_air);
  const RegionArea sota = region_area(cells, RegionKind::achievable_sota);
  std::cout << "max_cells=" << max_area.cell_count << '\n'
            << "air_cells=" << air.cell_count << '\n'
            << "sota_cells=" << sota.cell_count << '\n';
  if (sota.cell_count == 0) {
    std::cout << "area_ratio=undefined\n";
  } else {
    std::cout << "area_ratio="
              << fmt9(static_cast<double>(air.cell_count) /
                      static_cast<double>(sota.cell_count))
              << '\n';
  }
  return 0;
}

int run_mse_sweep(const CommonOptions& opts) {
  const ToolConfig cfg = load(opts);
  const auto rows = run_sweep(cfg.sweep, opts.threads);

  auto out = open_output(opts.out_path);
  write_sweep_csv(out, rows);
  write_manifest(opts.out_path + ".manifest.json", "mse-sweep", cfg,
                 {opts.out_path});
  std::cout << "rows=" << rows.size() << '\n';
  return 0;
}

SimConfig sim_config_for(const ToolConfig& cfg, Scheme scheme, double delta) {
  SimConfig sim;
  sim.plant = cfg.plant;
  sim.scheme = scheme;
  sim.sampling_period = delta;
  sim.timing = cfg.timing;
  sim.x0 = cfg.sim.x0;
  sim.horizon = cfg.sim.horizon;
  sim.channel = cfg.sim.channel;
  sim.gain = cfg.sim.gain;
  sim.seed = cfg.sim.seed;
  sim.noise_enabled = cfg.sim.noise_enabled;
  return sim;
}

// Reference trajectory on the (coarser) grid of `traj`, taken from the
// ideal run by striding; the sampling periods must divide evenly.
double rmse_against_ideal(const Trajectory& traj, const Trajectory& ideal,
                          double delta, double delta_ideal) {
  const long stride = std::llround(delta / delta_ideal);
  if (stride < 1 || std::abs(stride * delta_ideal - delta) > 1e-9) {
    throw ConfigError("scheme sampling period " + std::to_string(delta) +
                      " is not a multiple of the ideal period " +
                      std::to_string(delta_ideal));
  }
  return tracking_error(traj, subsample(ideal, static_cast<int>(stride)));
}

int run_simulate(const CommonOptions& opts) {
  const ToolConfig cfg = load(opts);

  const Trajectory ideal = simulate_closed_loop(
      sim_config_for(cfg, Scheme::ideal, cfg.sim.delta_ideal));
  const Trajectory air =
      simulate_closed_loop(sim_config_for(cfg, Scheme::air, cfg.sim.delta_air));
  const Trajectory sota = simulate_closed_loop(
      sim_config_for(cfg, Scheme::sota, cfg.sim.delta_sota));

  auto out = open_output(opts.out_path);
  const std::vector<Trajectory> all = {ideal, air, sota};
  write_trajectory_csv(out, all, cfg.plant.size());
  write_manifest(opts.out_path + ".manifest.json", "simulate", cfg,
                 {opts.out_path});

  const double rmse_air =
      rmse_against_ideal(air, ideal, cfg.sim.delta_air, cfg.sim.delta_ideal);
  const double rmse_sota =
      rmse_against_ideal(sota, ideal, cfg.sim.delta_sota, cfg.sim.delta_ideal);
  std::cout << "rmse_air=" << fmt9(rmse_air) << '\n'
            << "rmse_sota=" << fmt9(rmse_sota) << '\n'
            << "rmse_air_lt_rmse_sota=" << (rmse_air < rmse_sota ? 1 : 0)
            << '\n';
  return 0;
}

int run_scaling_debug(const CommonOptions& opts) {
  const ToolConfig cfg = load(opts);
  const ChannelRealization& ch = cfg.sim.channel;
  const Vector& k = cfg.sim.gain;
  const double k_norm2 = k.squaredNorm();

  const AirScaling a = optimize_air_scaling(ch, k);
  const double m_air = mse_air(a, ch, k);
  std::cout << "air alpha=" << fmt9(a.alpha) << '\n' << "air beta=[";
  for (Eigen::Index i = 0; i < a.beta.size(); ++i) {
    std::cout << (i ? "," : "") << fmt9(a.beta(i));
  }
  std::cout << "]\n"
            << "air mse=" << fmt9(m_air) << '\n'
            << "air normalized_mse=" << fmt9(m_air / k_norm2) << '\n';

  const SotaScaling s = optimize_sota_scaling(ch, k);
  const double m_sota = mse_sota(s, ch, k);
  std::cout << "sota alpha_a=" << fmt9(s.alpha_a) << '\n' << "sota alpha_s=[";
  for (Eigen::Index i = 0; i < s.alpha_s.size(); ++i) {
    std::cout << (i ? "," : "") << fmt9(s.alpha_s(i));
  }
  std::cout << "]\n" << "sota beta=[";
  for (Eigen::Index i = 0; i < s.beta.size(); ++i) {
    std::cout << (i ? "," : "") << fmt9(s.beta(i));
  }
  std::cout << "]\n"
            << "sota mse=" << fmt9(m_sota) << '\n'
            << "sota normalized_mse=" << fmt9(m_sota / k_norm2) << '\n';
  return 0;
}

int run_validate() {
  const auto results = run_validation();
  bool all_passed = true;
  for (const CheckResult& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail
              << ")\n";
    all_passed = all_passed && r.passed;
  }
  std::cout << (all_passed ? "all checks passed" : "some checks FAILED")
            << '\n';
  return all_passed ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop wireless control analysis: stability regions, "
               "control-MSE sweeps, and trajectory experiments for the "
               "over-the-air and multi-hop control schemes."};
  app.set_version_flag("--version", aircont::kVersion);
  app.require_subcommand(1);

  CommonOptions stability_opts, sweep_opts, sim_opts, debug_opts;
  CLI::App* c_stab = app.add_subcommand(
      "stability", "Sweep the (delta, tau/delta) grid and report region areas");
  add_common(c_stab, stability_opts, "stability.csv");
  CLI::App* c_sweep = app.add_subcommand(
      "mse-sweep", "Monte Carlo average control MSE over power and noise");
  add_common(c_sweep, sweep_opts, "mse_sweep.csv");
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "Closed-loop trajectories for ideal, air, and sota schemes");
  add_common(c_sim, sim_opts, "trajectories.csv");
  CLI::App* c_debug = app.add_subcommand(
      "scaling-debug", "Print optimized scaling factors and MSE for a config");
  add_common(c_debug, debug_opts, "");
  CLI::App* c_validate = app.add_subcommand(
      "validate", "Run the oracle self-check suite and report pass/fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_stab->parsed()) return run_stability(stability_opts);
    if (c_sweep->parsed()) return run_mse_sweep(sweep_opts);
    if (c_sim->parsed()) return run_simulate(sim_opts);
    if (c_debug->parsed()) return run_scaling_debug(debug_opts);
    if (c_validate->parsed()) return run_validate();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
