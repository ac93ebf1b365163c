#include "aircont/simulate.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

#include "aircont/csv.hpp"
#include "aircont/rng.hpp"

namespace aircont {

namespace {

// Shared stepping core. The control law is u(k) = -(g'x(k) + noise()); the
// state advances by the exact sampled dynamics for (delta, tau).
Trajectory run_loop(const PlantModel& plant, const Vector& gain, double delta,
                    double tau, const Vector& x0, long steps, Scheme scheme,
                    const std::function<double()>& noise) {
  const DiscretizedPlant disc = discretize(plant, delta, tau);

  Trajectory traj;
  traj.scheme = scheme;
  traj.times.reserve(static_cast<size_t>(steps) + 1);
  traj.states.reserve(static_cast<size_t>(steps) + 1);
  traj.controls.reserve(static_cast<size_t>(steps) + 1);

  Vector x = x0;
  double u_prev = 0.0;
  for (long k = 0; k <= steps; ++k) {
    const double u = -(gain.dot(x) + noise());
    traj.times.push_back(static_cast<double>(k) * delta);
    traj.states.push_back(x);
    traj.controls.push_back(u);
    if (k == steps) break;
    x = disc.state_transition * x + disc.input_current * u +
        disc.input_previous * u_prev;
    u_prev = u;
  }
  return traj;
}

}  // namespace

Trajectory simulate_closed_loop(const SimConfig& cfg) {
  if (!(cfg.horizon > 0.0)) {
    throw ConfigError("simulation horizon must be > 0, got " +
                      std::to_string(cfg.horizon));
  }
  if (!(cfg.sampling_period > 0.0)) {
    throw ConfigError("sampling period must be > 0");
  }
  const int n = cfg.plant.size();
  if (cfg.x0.size() != n || cfg.gain.size() != n) {
    throw ConfigError("x0/gain length does not match the plant dimension " +
                      std::to_string(n));
  }

  double tau = 0.0;
  if (cfg.scheme != Scheme::ideal) {
    if (cfg.channel.size() != n || cfg.timing.sensors != n) {
      throw ConfigError(
          "channel/timing sensor count does not match the plant dimension " +
          std::to_string(n));
    }
    tau = min_feasible_delay(cfg.scheme, cfg.timing);
    if (tau > cfg.sampling_period) {
      throw ConfigError(std::string(scheme_name(cfg.scheme)) +
                        " needs at least " + std::to_string(tau) +
                        " s of delay per period but the sampling period is " +
                        std::to_string(cfg.sampling_period) + " s");
    }
  }

  const long steps = std::llround(cfg.horizon / cfg.sampling_period);
  if (steps < 1) {
    throw ConfigError("horizon shorter than one sampling period");
  }

  RngStream stream(derive_stream_key(
      cfg.seed, {static_cast<std::uint64_t>(cfg.scheme), 0x5157ULL}));

  switch (cfg.scheme) {
    case Scheme::ideal:
      return run_loop(cfg.plant, cfg.gain, cfg.sampling_period, 0.0, cfg.x0,
                      steps, Scheme::ideal, [] { return 0.0; });
    case Scheme::air: {
      const AirScaling s = optimize_air_scaling(cfg.channel, cfg.gain);
      const Vector g = effective_gain_air(s, cfg.channel);
      const double noise_scale = s.alpha * std::sqrt(cfg.channel.sigma2);
      auto noise = [&stream, noise_scale, on = cfg.noise_enabled] {
        return on ? noise_scale * stream.normal() : 0.0;
      };
      return run_loop(cfg.plant, g, cfg.sampling_period, tau, cfg.x0, steps,
                      Scheme::air, noise);
    }
    case Scheme::sota: {
      const SotaScaling s = optimize_sota_scaling(cfg.channel, cfg.gain);
      const Vector g = effective_gain_sota(s, cfg.channel);
      // Per actuation: alpha_a (h_a sum_i alpha_s_i n_s_i + n_a) with the
      // per-sensor draws taken in index order, then the actuator draw.
      const Vector sensor_scale =
          s.alpha_a * cfg.channel.h_a * std::sqrt(cfg.channel.sigma_s2) *
          s.alpha_s;
      const double actuator_scale =
          s.alpha_a * std::sqrt(cfg.channel.sigma_a2);
      auto noise = [&stream, sensor_scale, actuator_scale,
                    on = cfg.noise_enabled] {
        if (!on) return 0.0;
        double v = 0.0;
        for (Eigen::Index i = 0; i < sensor_scale.size(); ++i) {
          v += sensor_scale(i) * stream.normal();
        }
        return v + actuator_scale * stream.normal();
      };
      return run_loop(cfg.plant, g, cfg.sampling_period, tau, cfg.x0, steps,
                      Scheme::sota, noise);
    }
  }
  throw ValidationError("unknown scheme");
}

Trajectory simulate_linear_feedback(const PlantModel& plant, const Vector& gain,
                                    double sampling_period, double delay,
                                    const Vector& x0, long steps) {
  if (steps < 1) {
    throw ValidationError("need at least one step");
  }
  if (x0.size() != plant.size() || gain.size() != plant.size()) {
    throw DimensionError("x0/gain length does not match the plant dimension");
  }
  return run_loop(plant, gain, sampling_period, delay, x0, steps,
                  Scheme::ideal, [] { return 0.0; });
}

double tracking_error(const Trajectory& traj, const Trajectory& reference) {
  if (traj.times.size() != reference.times.size() || traj.times.empty()) {
    throw ValidationError("trajectories live on different time grids");
  }
  double sum = 0.0;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    if (std::abs(traj.times[i] - reference.times[i]) > 1e-12) {
      throw ValidationError("trajectories live on different time grids");
    }
    if (traj.states[i].size() != reference.states[i].size()) {
      throw ValidationError("trajectories have different state dimensions");
    }
    sum += (traj.states[i] - reference.states[i]).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(traj.times.size()));
}

Trajectory subsample(const Trajectory& traj, int stride) {
  if (stride < 1) {
    throw ValidationError("subsample stride must be >= 1");
  }
  Trajectory out;
  out.scheme = traj.scheme;
  for (size_t i = 0; i < traj.times.size(); i += static_cast<size_t>(stride)) {
    out.times.push_back(traj.times[i]);
    out.states.push_back(traj.states[i]);
    out.controls.push_back(traj.controls[i]);
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, std::span<const Trajectory> trajs,
                          int state_count) {
  os << "t,scheme,u";
  for (int i = 1; i <= state_count; ++i) os << ",x" << i;
  os << '\n';
  for (const Trajectory& traj : trajs) {
    for (size_t k = 0; k < traj.times.size(); ++k) {
      if (traj.states[k].size() != state_count) {
        throw ValidationError("trajectory state dimension does not match header");
      }
      os << fmt9(traj.times[k]) << ',' << scheme_name(traj.scheme) << ','
         << fmt9(traj.controls[k]);
      for (int i = 0; i < state_count; ++i) os << ',' << fmt9(traj.states[k](i));
      os << '\n';
    }
  }
}

}  // namespace aircont
