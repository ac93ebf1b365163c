#include "aircont/validate.hpp"

#include <cmath>
#include <sstream>

#include "aircont/linalg.hpp"
#include "aircont/oracles.hpp"
#include "aircont/plant.hpp"
#include "aircont/rng.hpp"
#include "aircont/scaling.hpp"

namespace aircont {

namespace {

Matrix random_matrix(RngStream& stream, int n, double scale) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = stream.uniform(-scale, scale);
  return m;
}

Vector random_vector(RngStream& stream, int n, double lo, double hi) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = stream.uniform(lo, hi);
  return v;
}

ChannelRealization random_channel(RngStream& stream, int n) {
  Vector h(n);
  for (int i = 0; i < n; ++i) h(i) = 0.1 + stream.rayleigh_unit();
  const double h_a = 0.1 + stream.rayleigh_unit();
  const double sigma2 = stream.uniform(0.05, 1.0);
  const double p_bar = stream.uniform(0.2, 5.0);
  return make_channel(h, h_a, sigma2, sigma2, sigma2, p_bar);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& options) {
  std::vector<CheckResult> results;

  {  // Pade exponential vs truncated Taylor series.
    RngStream stream(derive_stream_key(options.seed, {1}));
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
      const Matrix m = random_matrix(stream, 4, 1.0);
      const Matrix diff = mat_exp(m, 0.5) - taylor_mat_exp(m, 0.5, 50);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    results.push_back({"mat_exp vs 50-term Taylor", worst <= 1e-9,
                       "max elementwise diff " + fmt(worst)});
  }

  {  // Van Loan integral vs adaptive Simpson quadrature.
    RngStream stream(derive_stream_key(options.seed, {2}));
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
      const int n = 2 + static_cast<int>(stream.uniform01() * 4.0);
      const Matrix a = random_matrix(stream, n, 2.0);
      const Vector b = random_vector(stream, n, -1.0, 1.0);
      const double t = stream.uniform(0.01, 0.5);
      const Vector diff = exp_and_integral(a, b, t).integral -
                          simpson_exp_integral(a, b, 0.0, t);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    results.push_back({"exp integral vs adaptive Simpson", worst <= 1e-9,
                       "max elementwise diff " + fmt(worst)});
  }

  {  // Schur spectral radius vs power iteration.
    RngStream stream(derive_stream_key(options.seed, {3}));
    double worst = 0.0;
    int done = 0;
    while (done < 8) {
      const Matrix m = random_matrix(stream, 5, 1.0);
      const double est1 = power_iteration_spectral_radius(m, 10000, 11);
      const double est2 = power_iteration_spectral_radius(m, 10000, 22);
      if (std::abs(est1 - est2) > 1e-9) continue;  // near-degenerate gap
      worst = std::max(worst, std::abs(spectral_radius(m) - est1));
      ++done;
    }
    results.push_back({"spectral radius vs power iteration", worst <= 1e-6,
                       "max diff " + fmt(worst)});
  }

  {  // Air optimizer vs dense grid search.
    RngStream stream(derive_stream_key(options.seed, {4}));
    double worst = -1e300;
    for (int i = 0; i < 10; ++i) {
      const int n = 1 + static_cast<int>(stream.uniform01() * 10.0);
      const ChannelRealization ch = random_channel(stream, n);
      const Vector k = random_vector(stream, n, 0.0, 100.0);
      const AirScaling s = optimize_air_scaling(ch, k);
      worst = std::max(worst, mse_air(s, ch, k) - air_grid_search_mse(ch, k, 4000));
    }
    results.push_back({"air optimizer vs grid search", worst <= 1e-6,
                       "max excess over grid " + fmt(worst)});
  }

  {  // Sota actuator scaling vs dense grid search.
    RngStream stream(derive_stream_key(options.seed, {5}));
    double worst = -1e300;
    for (int i = 0; i < 10; ++i) {
      const int n = 1 + static_cast<int>(stream.uniform01() * 10.0);
      const ChannelRealization ch = random_channel(stream, n);
      const Vector k = random_vector(stream, n, 0.0, 100.0);
      const SotaScaling s = optimize_sota_scaling(ch, k);
      const GridMinimum grid = sota_alpha_a_grid_search(ch, k, 4000);
      worst = std::max(worst, mse_sota(s, ch, k) - grid.best_value);
    }
    results.push_back({"sota actuator scaling vs grid search", worst <= 1e-9,
                       "max excess over grid " + fmt(worst)});
  }

  {  // Closed-form air MSE vs Monte Carlo.
    RngStream stream(derive_stream_key(options.seed, {6}));
    bool ok = true;
    double worst_z = 0.0;
    for (int i = 0; i < options.instances; ++i) {
      const int n = 2 + static_cast<int>(stream.uniform01() * 8.0);
      const ChannelRealization ch = random_channel(stream, n);
      const Vector k = random_vector(stream, n, 0.0, 100.0);
      const AirScaling s = optimize_air_scaling(ch, k);
      const double closed = mse_air(s, ch, k) * (1.0 + options.mse_air_bias);
      RngStream mc(derive_stream_key(options.seed, {6, 100 + static_cast<std::uint64_t>(i)}));
      const EmpiricalMse emp = empirical_mse_air(s, ch, k, options.mc_samples, mc);
      const double z = std::abs(closed - emp.mean) / emp.stderr_mean;
      worst_z = std::max(worst_z, z);
      ok = ok && z <= 3.0;
    }
    results.push_back({"air MSE closed form vs Monte Carlo", ok,
                       "worst |z| " + fmt(worst_z) + " (limit 3)"});
  }

  {  // Closed-form sota MSE vs Monte Carlo.
    RngStream stream(derive_stream_key(options.seed, {7}));
    bool ok = true;
    double worst_z = 0.0;
    for (int i = 0; i < options.instances; ++i) {
      const int n = 2 + static_cast<int>(stream.uniform01() * 8.0);
      const ChannelRealization ch = random_channel(stream, n);
      const Vector k = random_vector(stream, n, 0.0, 100.0);
      const SotaScaling s = optimize_sota_scaling(ch, k);
      const double closed = mse_sota(s, ch, k);
      RngStream mc(derive_stream_key(options.seed, {7, 100 + static_cast<std::uint64_t>(i)}));
      const EmpiricalMse emp = empirical_mse_sota(s, ch, k, options.mc_samples, mc);
      const double z = std::abs(closed - emp.mean) / emp.stderr_mean;
      worst_z = std::max(worst_z, z);
      ok = ok && z <= 3.0;
    }
    results.push_back({"sota MSE closed form vs Monte Carlo", ok,
                       "worst |z| " + fmt(worst_z) + " (limit 3)"});
  }

  return results;
}

}  // namespace aircont
