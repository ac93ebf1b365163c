#ifndef AIRCONT_SCALING_HPP
#define AIRCONT_SCALING_HPP

#include "aircont/types.hpp"

namespace aircont {

/// One draw of the wireless environment: per-sensor channel magnitudes, the
/// controller-to-actuator channel, receiver noise variances, and the
/// per-sensor peak transmit power.
struct ChannelRealization {
  Vector h;              // sensor-to-receiver channel coefficients, > 0
  double h_a = 1.0;      // controller-to-actuator channel coefficient
  double sigma2 = 0.0;   // receiver noise variance, air scheme
  double sigma_s2 = 0.0; // per-sensor-link noise variance, sota scheme
  double sigma_a2 = 0.0; // actuator-link noise variance, sota scheme
  double p_bar = 1.0;    // peak transmit power (beta_i^2 <= p_bar)

  int size() const { return static_cast<int>(h.size()); }
};

ChannelRealization make_channel(Vector h, double h_a, double sigma2,
                                double sigma_s2, double sigma_a2, double p_bar);

/// Tx scaling per sensor plus the single Rx scaling at the actuator.
struct AirScaling {
  Vector beta;
  double alpha = 0.0;
};

/// Tx scaling per sensor, per-sensor Rx scaling at the controller, and the
/// Rx scaling at the actuator.
struct SotaScaling {
  Vector beta;
  Vector alpha_s;
  double alpha_a = 0.0;
};

/// Feedback row the plant actually sees: g_i = alpha h_i beta_i.
Vector effective_gain_air(const AirScaling& s, const ChannelRealization& ch);

/// Feedback row for the multi-hop scheme: g_i = alpha_a h_a h_i beta_i alpha_s_i.
Vector effective_gain_sota(const SotaScaling& s, const ChannelRealization& ch);

/// Mean square error between the received control signal and k'x for
/// standard-normal states: ||alpha (h o beta) - k||^2 + sigma^2 alpha^2.
double mse_air(const AirScaling& s, const ChannelRealization& ch,
               const Vector& k);

/// Multi-hop counterpart with per-sensor noise scaled through the
/// controller and actuator stages:
/// ||alpha_a h_a D alpha_s - k||^2 + alpha_a^2 h_a^2 sigma_s^2 ||alpha_s||^2
/// + alpha_a^2 sigma_a^2, where D = diag(h_i beta_i).
double mse_sota(const SotaScaling& s, const ChannelRealization& ch,
                const Vector& k);

/// Closed-form optimum for the multi-hop scheme: every sensor transmits at
/// peak power, the controller applies the per-link MMSE scaling, and the
/// actuator scaling minimizes the end-to-end MSE given the first hop.
SotaScaling optimize_sota_scaling(const ChannelRealization& ch, const Vector& k);

/// Constrained Tx-Rx policy for the air scheme: for a fixed Rx scaling the
/// best per-sensor Tx scaling is the clipped inversion
/// beta_i = min(sqrt(p_bar), k_i / (alpha h_i)); the remaining 1-D problem
/// in alpha is piecewise smooth between the clip breakpoints and is solved
/// by golden-section search per piece.
AirScaling optimize_air_scaling(const ChannelRealization& ch, const Vector& k);

/// Diagnostic only: residual MSE when the Tx side inverts the channel
/// exactly (no power limit), which is sigma^2 alpha^2 and vanishes as the
/// Rx scaling goes to 0. Not a usable policy; the zero-power limit emits
/// nothing.
double unconstrained_air_mse(const ChannelRealization& ch, double alpha);

}  // namespace aircont

#endif  // AIRCONT_SCALING_HPP
