#include "aircont/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "aircont/linalg.hpp"

namespace aircont {

Matrix taylor_mat_exp(const Matrix& m, double t, int terms) {
  detail::require_square(m, "taylor_mat_exp input", kDefaultDimensionCap);
  const Eigen::Index n = m.rows();
  const Matrix mt = m * t;

  Matrix sum = Matrix::Identity(n, n);
  Matrix compensation = Matrix::Zero(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int j = 1; j <= terms; ++j) {
    term = (mt * term) / static_cast<double>(j);
    // Kahan step, elementwise.
    const Matrix y = term - compensation;
    const Matrix s = sum + y;
    compensation = (s - sum) - y;
    sum = s;
  }
  return sum;
}

namespace {

Vector exp_times_vector(const Matrix& a, const Vector& b, double s) {
  return mat_exp(a, s) * b;
}

void adaptive_simpson(const Matrix& a, const Vector& b, double lo, double hi,
                      const Vector& f_lo, const Vector& f_mid,
                      const Vector& f_hi, const Vector& whole, double tol,
                      int depth, Vector& out) {
  const double mid = 0.5 * (lo + hi);
  const Vector f_lq = exp_times_vector(a, b, 0.5 * (lo + mid));
  const Vector f_rq = exp_times_vector(a, b, 0.5 * (mid + hi));
  const Vector left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lq + f_mid);
  const Vector right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rq + f_hi);
  const Vector delta = left + right - whole;
  if (depth <= 0 || delta.cwiseAbs().maxCoeff() <= 15.0 * tol) {
    out += left + right + delta / 15.0;
    return;
  }
  adaptive_simpson(a, b, lo, mid, f_lo, f_lq, f_mid, left, 0.5 * tol, depth - 1,
                   out);
  adaptive_simpson(a, b, mid, hi, f_mid, f_rq, f_hi, right, 0.5 * tol,
                   depth - 1, out);
}

}  // namespace

Vector simpson_exp_integral(const Matrix& a, const Vector& b, double lo,
                            double hi, double tol) {
  detail::require_square(a, "simpson_exp_integral state matrix",
                         kDefaultDimensionCap);
  if (hi < lo) {
    throw ValidationError("integration interval is reversed");
  }
  Vector out = Vector::Zero(b.size());
  if (hi == lo) return out;
  const Vector f_lo = exp_times_vector(a, b, lo);
  const Vector f_mid = exp_times_vector(a, b, 0.5 * (lo + hi));
  const Vector f_hi = exp_times_vector(a, b, hi);
  const Vector whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
  adaptive_simpson(a, b, lo, hi, f_lo, f_mid, f_hi, whole, tol, 40, out);
  return out;
}

double power_iteration_spectral_radius(const Matrix& m, int iterations,
                                       std::uint64_t start_seed) {
  detail::require_square(m, "power iteration input", kDefaultDimensionCap);
  const Eigen::Index n = m.rows();
  if (n == 1) return std::abs(m(0, 0));

  RngStream stream(derive_stream_key(start_seed, {0x9077ULL}));
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = stream.normal();
  v.normalize();

  Vector prev = v;
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = m * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    prev = v;
    v = w / norm;

    // Ritz values on span{prev, v}: captures both a dominant real
    // eigenvalue and a dominant complex pair.
    Vector q1 = prev;
    Vector q2 = v - q1.dot(v) * q1;
    const double q2n = q2.norm();
    Eigen::Matrix2d small;
    if (q2n > 1e-13) {
      q2 /= q2n;
      small << q1.dot(m * q1), q1.dot(m * q2), q2.dot(m * q1), q2.dot(m * q2);
    } else {
      // Converged to a single direction; Rayleigh quotient suffices.
      const double r = q1.dot(m * q1);
      small << r, 0.0, 0.0, 0.0;
    }
    const double tr = small(0, 0) + small(1, 1);
    const double det = small(0, 0) * small(1, 1) - small(0, 1) * small(1, 0);
    const std::complex<double> disc =
        std::sqrt(std::complex<double>(tr * tr - 4.0 * det, 0.0));
    const double mod1 = std::abs(0.5 * (tr + disc));
    const double mod2 = std::abs(0.5 * (tr - disc));
    estimate = std::max(mod1, mod2);
  }
  return estimate;
}

double iterate_log_growth(const Matrix& m, const Vector& z0, long steps) {
  if (m.rows() != z0.size()) {
    throw DimensionError("start vector length does not match matrix dimension");
  }
  Vector z = z0;
  double log_norm = 0.0;
  for (long k = 0; k < steps; ++k) {
    z = m * z;
    const double norm = z.norm();
    if (norm == 0.0) return -std::numeric_limits<double>::infinity();
    log_norm += std::log(norm);
    z /= norm;
  }
  return log_norm;
}

double air_grid_search_mse(const ChannelRealization& ch, const Vector& k,
                           int grid_points) {
  const double root_p = std::sqrt(ch.p_bar);
  double alpha_max = 0.0;
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    alpha_max = std::max(alpha_max, k(i) / (ch.h(i) * root_p));
  }

  AirScaling trial;
  trial.beta = Vector::Zero(k.size());
  trial.alpha = 0.0;
  double best = mse_air(trial, ch, k);  // alpha = 0 baseline of k'k
  if (alpha_max == 0.0) return best;

  // Log-spaced grid reaching a little past the largest clip breakpoint.
  const double lo = alpha_max * 1e-6;
  const double hi = alpha_max * 1.25;
  for (int g = 0; g < grid_points; ++g) {
    const double f = static_cast<double>(g) / (grid_points - 1);
    const double alpha = lo * std::pow(hi / lo, f);
    trial.alpha = alpha;
    trial.beta = (k.array() / (alpha * ch.h.array())).min(root_p).matrix();
    best = std::min(best, mse_air(trial, ch, k));
  }
  return best;
}

GridMinimum sota_alpha_a_grid_search(const ChannelRealization& ch,
                                     const Vector& k, int grid_points) {
  SotaScaling s = optimize_sota_scaling(ch, k);
  const double center = s.alpha_a;
  const double hi = 2.0 * std::abs(center) + 1e-6;

  GridMinimum result;
  result.resolution = hi / (grid_points - 1);
  bool first = true;
  for (int g = 0; g < grid_points; ++g) {
    s.alpha_a = std::copysign(static_cast<double>(g) * result.resolution,
                              center == 0.0 ? 1.0 : center);
    const double value = mse_sota(s, ch, k);
    if (first || value < result.best_value) {
      first = false;
      result.best_value = value;
      result.best_arg = s.alpha_a;
    }
  }
  return result;
}

EmpiricalMse empirical_mse_air(const AirScaling& s, const ChannelRealization& ch,
                               const Vector& k, long samples,
                               RngStream& stream) {
  const Eigen::Index n = k.size();
  const Vector gain = effective_gain_air(s, ch);
  const double noise_scale = std::sqrt(ch.sigma2);

  double mean = 0.0, m2 = 0.0;
  Vector x(n);
  for (long t = 0; t < samples; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) x(i) = stream.normal();
    const double u = gain.dot(x) + s.alpha * noise_scale * stream.normal();
    const double err = u - k.dot(x);
    const double sq = err * err;
    const double d = sq - mean;
    mean += d / static_cast<double>(t + 1);
    m2 += d * (sq - mean);
  }
  EmpiricalMse out;
  out.mean = mean;
  out.stderr_mean =
      samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) /
                              static_cast<double>(samples))
                  : 0.0;
  return out;
}

EmpiricalMse empirical_mse_sota(const SotaScaling& s,
                                const ChannelRealization& ch, const Vector& k,
                                long samples, RngStream& stream) {
  const Eigen::Index n = k.size();
  const Vector d = ch.h.cwiseProduct(s.beta);
  const double ss = std::sqrt(ch.sigma_s2);
  const double sa = std::sqrt(ch.sigma_a2);

  double mean = 0.0, m2 = 0.0;
  Vector x(n);
  for (long t = 0; t < samples; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) x(i) = stream.normal();
    double hop1 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      hop1 += s.alpha_s(i) * (d(i) * x(i) + ss * stream.normal());
    }
    const double u = s.alpha_a * (ch.h_a * hop1 + sa * stream.normal());
    const double err = u - k.dot(x);
    const double sq = err * err;
    const double dd = sq - mean;
    mean += dd / static_cast<double>(t + 1);
    m2 += dd * (sq - mean);
  }
  EmpiricalMse out;
  out.mean = mean;
  out.stderr_mean =
      samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) /
                              static_cast<double>(samples))
                  : 0.0;
  return out;
}

Vector rk4_propagate(const Matrix& a, const Vector& b, const Vector& x0,
                     double u_prev, double u_cur, double delta, double tau,
                     int substeps) {
  auto integrate = [&](Vector x, double u, double t_len) {
    if (t_len <= 0.0) return x;
    const double h = t_len / substeps;
    const Vector bu = b * u;
    for (int i = 0; i < substeps; ++i) {
      const Vector k1 = a * x + bu;
      const Vector k2 = a * (x + 0.5 * h * k1) + bu;
      const Vector k3 = a * (x + 0.5 * h * k2) + bu;
      const Vector k4 = a * (x + h * k3) + bu;
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
  };
  Vector x = integrate(x0, u_prev, tau);
  return integrate(x, u_cur, delta - tau);
}

}  // namespace aircont
