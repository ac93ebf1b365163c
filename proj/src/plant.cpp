#include "aircont/plant.hpp"

#include <string>
#include <utility>

#include "aircont/linalg.hpp"

namespace aircont {

PlantModel make_plant(Matrix a, Vector b, std::vector<std::string> labels) {
  detail::require_square(a, "plant state matrix", kDefaultDimensionCap);
  detail::require_finite(a, "plant state matrix");
  detail::require_finite(b, "plant input vector");
  if (a.rows() != b.size()) {
    throw DimensionError("plant input vector length " +
                         std::to_string(b.size()) +
                         " does not match state matrix dimension " +
                         std::to_string(a.rows()));
  }
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != b.size()) {
    throw ValidationError("plant has " + std::to_string(labels.size()) +
                          " labels for " + std::to_string(b.size()) +
                          " states");
  }
  return PlantModel{std::move(a), std::move(b), std::move(labels)};
}

DiscretizedPlant discretize(const PlantModel& plant, double sampling_period,
                            double delay) {
  if (!(sampling_period > 0.0)) {
    throw ValidationError("sampling period must be > 0, got " +
                          std::to_string(sampling_period));
  }
  if (delay < 0.0) {
    throw ValidationError("delay must be >= 0, got " + std::to_string(delay));
  }
  if (delay > sampling_period) {
    throw FeasibilityError("delay " + std::to_string(delay) +
                           " exceeds the sampling period " +
                           std::to_string(sampling_period));
  }

  // Two Van Loan integrals; the late-interval input vector is the
  // difference, which is exact by additivity of the integral.
  const auto full = exp_and_integral(plant.A, plant.b, sampling_period);
  const auto early = exp_and_integral(plant.A, plant.b, sampling_period - delay);
  if (!full.exp.allFinite() || !full.integral.allFinite() ||
      !early.integral.allFinite()) {
    throw NumericalError("matrix exponential overflowed at sampling period " +
                         std::to_string(sampling_period));
  }

  DiscretizedPlant disc;
  disc.state_transition = full.exp;
  disc.input_current = early.integral;
  disc.input_previous = full.integral - early.integral;
  disc.sampling_period = sampling_period;
  disc.delay = delay;

  const double scale = 1.0 + full.integral.cwiseAbs().maxCoeff();
  const double defect =
      (disc.input_current + disc.input_previous - full.integral)
          .cwiseAbs()
          .maxCoeff();
  if (defect > 1e-9 * scale) {
    throw NumericalError("input integral split defect " +
                         std::to_string(defect) + " exceeds tolerance");
  }
  return disc;
}

AugmentedSystem augment(const DiscretizedPlant& disc, const Vector& gain,
                        Scheme scheme) {
  const Eigen::Index n = disc.state_transition.rows();
  if (gain.size() != n) {
    throw DimensionError("effective gain length " +
                         std::to_string(gain.size()) +
                         " does not match plant dimension " +
                         std::to_string(n));
  }
  detail::require_finite(gain, "effective gain");

  AugmentedSystem aug;
  aug.transition = Matrix::Zero(n + 1, n + 1);
  aug.transition.topLeftCorner(n, n) =
      disc.state_transition - disc.input_current * gain.transpose();
  aug.transition.topRightCorner(n, 1) = disc.input_previous;
  aug.transition.bottomLeftCorner(1, n) = -gain.transpose();
  aug.scheme = scheme;
  aug.effective_gain = gain;
  return aug;
}

PlantModel default_ball_and_beam() {
  Matrix a = Matrix::Zero(4, 4);
  a(0, 1) = 1.0;
  a(1, 2) = 7.0;
  a(2, 3) = 1.0;
  Vector b = Vector::Zero(4);
  b(3) = 1.0;
  return make_plant(std::move(a), std::move(b),
                    {"ball position [m]", "ball velocity [m/s]",
                     "beam angle [rad]", "beam angular rate [rad/s]"});
}

}  // namespace aircont
