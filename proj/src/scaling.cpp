#include "aircont/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "aircont/linalg.hpp"

namespace aircont {

namespace {

void require_gain_match(const ChannelRealization& ch, const Vector& k) {
  if (k.size() != ch.h.size()) {
    throw DimensionError("gain length " + std::to_string(k.size()) +
                         " does not match channel dimension " +
                         std::to_string(ch.h.size()));
  }
  detail::require_finite(k, "control gain");
}

// Golden-section minimization on [lo, hi]; f must be unimodal there.
template <typename F>
double golden_section(F&& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  const double tol = 1e-13 * std::max(1.0, std::abs(hi));
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ChannelRealization make_channel(Vector h, double h_a, double sigma2,
                                double sigma_s2, double sigma_a2,
                                double p_bar) {
  if (h.size() < 1) {
    throw DimensionError("channel needs at least one sensor coefficient");
  }
  detail::require_finite(h, "channel coefficients");
  if ((h.array() <= 0.0).any()) {
    throw ValidationError("channel coefficients must be > 0 (magnitudes)");
  }
  if (!std::isfinite(h_a)) {
    throw ValidationError("actuator channel coefficient must be finite");
  }
  if (sigma2 < 0.0 || sigma_s2 < 0.0 || sigma_a2 < 0.0) {
    throw ValidationError("noise variances must be >= 0");
  }
  if (!(p_bar > 0.0)) {
    throw ValidationError("peak power must be > 0, got " + std::to_string(p_bar));
  }
  return ChannelRealization{std::move(h), h_a, sigma2, sigma_s2, sigma_a2, p_bar};
}

Vector effective_gain_air(const AirScaling& s, const ChannelRealization& ch) {
  if (s.beta.size() != ch.h.size()) {
    throw DimensionError("beta length does not match channel dimension");
  }
  return s.alpha * ch.h.cwiseProduct(s.beta);
}

Vector effective_gain_sota(const SotaScaling& s, const ChannelRealization& ch) {
  if (s.beta.size() != ch.h.size() || s.alpha_s.size() != ch.h.size()) {
    throw DimensionError("scaling lengths do not match channel dimension");
  }
  return s.alpha_a * ch.h_a *
         ch.h.cwiseProduct(s.beta).cwiseProduct(s.alpha_s);
}

double mse_air(const AirScaling& s, const ChannelRealization& ch,
               const Vector& k) {
  require_gain_match(ch, k);
  const Vector gain = effective_gain_air(s, ch);
  return (gain - k).squaredNorm() + ch.sigma2 * s.alpha * s.alpha;
}

double mse_sota(const SotaScaling& s, const ChannelRealization& ch,
                const Vector& k) {
  require_gain_match(ch, k);
  const Vector gain = effective_gain_sota(s, ch);
  const double a2 = s.alpha_a * s.alpha_a;
  return (gain - k).squaredNorm() +
         a2 * ch.h_a * ch.h_a * ch.sigma_s2 * s.alpha_s.squaredNorm() +
         a2 * ch.sigma_a2;
}

SotaScaling optimize_sota_scaling(const ChannelRealization& ch,
                                  const Vector& k) {
  require_gain_match(ch, k);
  if (ch.h_a == 0.0) {
    throw DegenerateChannelError(
        "actuator channel coefficient is zero; the second hop carries nothing");
  }

  const double root_p = std::sqrt(ch.p_bar);
  SotaScaling s;
  s.beta = Vector::Constant(k.size(), root_p);

  // Per-link MMSE scaling at the controller given peak-power transmission.
  const Vector d = ch.h * root_p;  // diag entries h_i beta_i
  s.alpha_s = (d.cwiseProduct(k).array() / (d.array().square() + ch.sigma_s2))
                  .matrix();

  // Actuator scaling minimizing the end-to-end MSE for the fixed first hop.
  const Vector da = d.cwiseProduct(s.alpha_s);
  const double ha2 = ch.h_a * ch.h_a;
  const double numer = ch.h_a * da.dot(k);
  const double denom = ha2 * da.squaredNorm() +
                       ha2 * ch.sigma_s2 * s.alpha_s.squaredNorm() +
                       ch.sigma_a2;
  if (!(denom > 0.0)) {
    throw DegenerateChannelError(
        "degenerate second hop: zero signal and noise power at the actuator");
  }
  s.alpha_a = numer / denom;
  return s;
}

AirScaling optimize_air_scaling(const ChannelRealization& ch, const Vector& k) {
  require_gain_match(ch, k);
  if ((k.array() < 0.0).any()) {
    throw ValidationError("control gain entries must be >= 0");
  }

  const Eigen::Index n = k.size();
  const double root_p = std::sqrt(ch.p_bar);

  AirScaling best;
  best.beta = Vector::Zero(n);
  best.alpha = 0.0;
  if ((k.array() == 0.0).all()) {
    return best;  // nothing to emit
  }

  // Objective in alpha after folding in the clipped per-sensor inversion:
  //   f(alpha) = sum_i (min(alpha h_i sqrt(p), k_i) - k_i)^2 + sigma2 alpha^2.
  // Sensor i is power-limited below its breakpoint a_i = k_i/(h_i sqrt(p)),
  // so between consecutive sorted breakpoints f is one quadratic
  //   f(alpha) = (S_hh + sigma2) alpha^2 - 2 S_hk alpha + S_kk
  // with sums over the still-limited sensors. Suffix sums over the sorted
  // order give each piece in O(1).
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<double> breakpoint(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    breakpoint[static_cast<size_t>(i)] = k(i) / (ch.h(i) * root_p);
  }
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return breakpoint[static_cast<size_t>(a)] < breakpoint[static_cast<size_t>(b)];
  });

  std::vector<double> s_hh(static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> s_hk(static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> s_kk(static_cast<size_t>(n) + 1, 0.0);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    const Eigen::Index i = order[static_cast<size_t>(j)];
    const double hp = ch.h(i) * root_p;
    s_hh[static_cast<size_t>(j)] = s_hh[static_cast<size_t>(j) + 1] + hp * hp;
    s_hk[static_cast<size_t>(j)] = s_hk[static_cast<size_t>(j) + 1] + hp * k(i);
    s_kk[static_cast<size_t>(j)] = s_kk[static_cast<size_t>(j) + 1] + k(i) * k(i);
  }

  double best_alpha = 0.0;
  double best_value = s_kk[0];  // alpha = 0: nothing received, MSE = k'k
  auto consider = [&](double alpha, double value) {
    if (value < best_value) {
      best_value = value;
      best_alpha = alpha;
    }
  };

  for (Eigen::Index j = 0; j <= n; ++j) {
    // Piece j covers [edge_j, edge_{j+1}] with sensors order[j..n) limited.
    const double lo = j == 0 ? 0.0 : breakpoint[static_cast<size_t>(order[static_cast<size_t>(j - 1)])];
    const double hi = j == n ? lo : breakpoint[static_cast<size_t>(order[static_cast<size_t>(j)])];
    const double qa = s_hh[static_cast<size_t>(j)] + ch.sigma2;
    const double qb = s_hk[static_cast<size_t>(j)];
    const double qc = s_kk[static_cast<size_t>(j)];
    auto piece = [&](double alpha) { return (qa * alpha - 2.0 * qb) * alpha + qc; };

    consider(hi, piece(hi));
    if (hi > lo) {
      consider(lo, piece(lo));
      // Interior minimum only where the derivative changes sign.
      if (qa * lo < qb && qb < qa * hi) {
        const double alpha = golden_section(piece, lo, hi);
        consider(alpha, piece(alpha));
      }
    }
    // Past the last breakpoint f = qc + sigma2 alpha^2 is nondecreasing, so
    // the right edge candidate already covers piece n.
  }

  best.alpha = best_alpha;
  if (best_alpha > 0.0) {
    best.beta =
        (k.array() / (best_alpha * ch.h.array())).min(root_p).matrix();
  }
  return best;
}

double unconstrained_air_mse(const ChannelRealization& ch, double alpha) {
  return ch.sigma2 * alpha * alpha;
}

}  // namespace aircont
