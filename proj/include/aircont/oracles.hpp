#ifndef AIRCONT_ORACLES_HPP
#define AIRCONT_ORACLES_HPP

#include "aircont/rng.hpp"
#include "aircont/scaling.hpp"
#include "aircont/types.hpp"

// Independent cross-checks used by the `validate` command and the test
// suites. Each routine deliberately takes a different algorithmic route
// than the implementation it is used to check.

namespace aircont {

/// Truncated Taylor series for e^{Mt} with Kahan-compensated accumulation.
Matrix taylor_mat_exp(const Matrix& m, double t, int terms = 50);

/// Adaptive Simpson quadrature of s -> e^{As} b over [lo, hi].
Vector simpson_exp_integral(const Matrix& a, const Vector& b, double lo,
                            double hi, double tol = 1e-12);

/// Spectral-radius estimate from plain power iteration, reading the
/// dominant modulus off the two-dimensional Krylov projection (handles a
/// dominant complex pair). Deterministic given the seed of the start vector.
double power_iteration_spectral_radius(const Matrix& m, int iterations = 10000,
                                       std::uint64_t start_seed = 1);

/// log ||M^steps z0|| - ||z0|| computed with per-step renormalization, so
/// growth and decay are measured without overflow. Negative means decay.
double iterate_log_growth(const Matrix& m, const Vector& z0, long steps);

/// Best air-scheme MSE over a dense Rx-scaling grid (log-spaced plus the
/// zero candidate), with the per-sensor Tx scaling clipped at each grid
/// point. Verification oracle for optimize_air_scaling.
double air_grid_search_mse(const ChannelRealization& ch, const Vector& k,
                           int grid_points);

struct GridMinimum {
  double best_value = 0.0;
  double best_arg = 0.0;
  double resolution = 0.0;
};

/// Best sota-scheme MSE over a dense actuator-scaling grid, holding the
/// closed-form first hop fixed. Verification oracle for the alpha_a optimum.
GridMinimum sota_alpha_a_grid_search(const ChannelRealization& ch,
                                     const Vector& k, int grid_points);

struct EmpiricalMse {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

/// Monte Carlo estimate of E |alpha((h o beta)'x + n) - k'x|^2 with
/// standard-normal states.
EmpiricalMse empirical_mse_air(const AirScaling& s, const ChannelRealization& ch,
                               const Vector& k, long samples, RngStream& stream);

/// Monte Carlo estimate of the multi-hop error
/// E |alpha_a(h_a alpha_s'(Dx + n_s) + n_a) - k'x|^2.
EmpiricalMse empirical_mse_sota(const SotaScaling& s,
                                const ChannelRealization& ch, const Vector& k,
                                long samples, RngStream& stream);

/// RK4 integration of xdot = Ax + bu over one sampling period with the
/// piecewise-constant input u_prev on [0, tau) and u_cur on [tau, delta).
Vector rk4_propagate(const Matrix& a, const Vector& b, const Vector& x0,
                     double u_prev, double u_cur, double delta, double tau,
                     int substeps = 1000);

}  // namespace aircont

#endif  // AIRCONT_ORACLES_HPP
