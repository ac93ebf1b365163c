#ifndef AIRCONT_MONTECARLO_HPP
#define AIRCONT_MONTECARLO_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "aircont/rng.hpp"
#include "aircont/types.hpp"

namespace aircont {

/// Monte Carlo sweep over peak power (at a fixed noise variance) and over
/// noise variance (at a fixed peak power), for each sensor count and both
/// schemes.
struct SweepConfig {
  std::vector<int> sensor_counts = {10, 100};
  std::vector<double> p_bar_values = {0.1, 0.5, 1.0, 1.5, 2.0, 2.5,
                                      3.0, 3.5, 4.0, 4.5, 5.0};
  std::vector<double> sigma2_values = {0.1, 0.2, 0.3, 0.4, 0.5,
                                       0.6, 0.7, 0.8, 0.9, 1.0};
  double p_bar_fixed = 2.5;   // used while sweeping sigma2
  double sigma2_fixed = 0.5;  // used while sweeping p_bar
  long trials = 10000;
  std::uint64_t seed = 1;
};

struct SweepRow {
  Scheme scheme = Scheme::air;
  int sensors = 0;
  double p_bar = 0.0;
  double sigma2 = 0.0;
  long trials = 0;  // trials that produced a value
  double avg_control_mse = 0.0;
  double stderr_mean = 0.0;
  long skipped = 0;  // degenerate draws (zero channel or zero gain)
};

/// Per-sensor Rayleigh channel magnitudes with E[h_i^2] = 1.
Vector sample_channel(RngStream& stream, int sensors);

/// Control gain entries i.i.d. uniform on [0, 100].
Vector sample_gain(RngStream& stream, int sensors);

/// Runs `trials` independent draws of (channel, actuator channel, gain),
/// optimizes the scheme's scaling for each, and averages the closed-form
/// MSE normalized by k'k. The draw order is scheme-independent, so calling
/// this twice with copies of the same stream evaluates both schemes on
/// identical realizations.
SweepRow average_control_mse(Scheme scheme, int sensors, double p_bar,
                             double sigma2, long trials, RngStream stream);

/// Full cross product: both sweep axes x sensor counts x schemes, with one
/// stream per (axis, sensors, value) point shared by the two schemes.
/// Output order and content are independent of the thread count.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int threads = 1);

/// CSV: scheme,N,p_bar,sigma2,trials,avg_control_mse,stderr
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

}  // namespace aircont

#endif  // AIRCONT_MONTECARLO_HPP
