#ifndef AIRCONT_SIMULATE_HPP
#define AIRCONT_SIMULATE_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "aircont/plant.hpp"
#include "aircont/scaling.hpp"
#include "aircont/stability.hpp"
#include "aircont/types.hpp"

namespace aircont {

/// One closed-loop run. The channel is one fixed realization; the scheme's
/// scaling is optimized against it once, and fresh receiver noise is drawn
/// at every actuation. The ideal scheme ignores channel, delay, and noise.
struct SimConfig {
  PlantModel plant;
  Scheme scheme = Scheme::ideal;
  double sampling_period = 0.01;
  NetworkTiming timing{0.01, 4};
  Vector x0;
  double horizon = 10.0;  // seconds
  ChannelRealization channel;
  Vector gain;  // target control gain k
  std::uint64_t seed = 1;
  bool noise_enabled = true;
};

struct Trajectory {
  std::vector<double> times;     // sampling instants k * delta
  std::vector<Vector> states;    // x(k delta)
  std::vector<double> controls;  // u computed at k delta, applied from k delta + tau
  Scheme scheme = Scheme::ideal;
};

/// Exact inter-sample propagation of the sampled plant under the scheme's
/// (possibly noisy) control law; u before the first sample is 0.
Trajectory simulate_closed_loop(const SimConfig& cfg);

/// Deterministic delayed state feedback u = -g'x at the given delay; the
/// ideal scheme is this law with g = k and zero delay. Shares the stepping
/// code with simulate_closed_loop.
Trajectory simulate_linear_feedback(const PlantModel& plant, const Vector& gain,
                                    double sampling_period, double delay,
                                    const Vector& x0, long steps);

/// Root-mean-square over sampling instants of ||x - x_ref||. Both
/// trajectories must live on the same time grid.
double tracking_error(const Trajectory& traj, const Trajectory& reference);

/// Every stride-th sample, starting from the first.
Trajectory subsample(const Trajectory& traj, int stride);

/// CSV: t,scheme,u,x1,...,xN - one block of rows per trajectory.
void write_trajectory_csv(std::ostream& os, std::span<const Trajectory> trajs,
                          int state_count);

}  // namespace aircont

#endif  // AIRCONT_SIMULATE_HPP
