#ifndef AIRCONT_PLANT_HPP
#define AIRCONT_PLANT_HPP

#include <string>
#include <vector>

#include "aircont/types.hpp"

namespace aircont {

/// Continuous-time LTI plant xdot = A x + b u with one state per sensor and
/// a scalar control input.
struct PlantModel {
  Matrix A;
  Vector b;
  std::vector<std::string> labels;  // optional per-state names

  int size() const { return static_cast<int>(b.size()); }
};

/// Validates and builds a plant (A square, dimensions matching, finite).
PlantModel make_plant(Matrix a, Vector b, std::vector<std::string> labels = {});

/// Sampled plant for one (sampling period, delay) pair. During each period
/// the previously computed control acts for the first `delay` seconds and
/// the fresh one for the rest:
///   x[k+1] = state_transition x[k] + input_current u[k] + input_previous u[k-1]
struct DiscretizedPlant {
  Matrix state_transition;  // e^{A delta}
  Vector input_current;     // integral of e^{As} b over [0, delta - tau]
  Vector input_previous;    // integral of e^{As} b over [delta - tau, delta]
  double sampling_period = 0.0;
  double delay = 0.0;
};

DiscretizedPlant discretize(const PlantModel& plant, double sampling_period,
                            double delay);

/// Closed-loop transition of the augmented state [x; u_prev] under the
/// delayed feedback u = -g' x:
///   [[Phi - Gamma0 g', Gamma1], [-g', 0]]
/// Both schemes produce this same structure; only the effective gain vector
/// g differs (alpha (h o beta) for air, alpha_a h_a D alpha_s for sota).
struct AugmentedSystem {
  Matrix transition;  // (N+1) x (N+1)
  Scheme scheme = Scheme::air;
  Vector effective_gain;
};

AugmentedSystem augment(const DiscretizedPlant& disc, const Vector& gain,
                        Scheme scheme = Scheme::air);

/// Linearized ball-and-beam model with 4 states (ball position/velocity,
/// beam angle/rate). This is the desk-scale default plant; load a config
/// file to override it.
PlantModel default_ball_and_beam();

}  // namespace aircont

#endif  // AIRCONT_PLANT_HPP
