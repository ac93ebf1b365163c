#ifndef AIRCONT_LINALG_HPP
#define AIRCONT_LINALG_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <utility>

#include "aircont/types.hpp"

// Dense kernel used by everything else: matrix exponential, the paired
// (e^{At}, integral of e^{As} b) computation, and the spectral radius.
// Everything here is a pure function of its arguments.

namespace aircont {

/// Dimensions above this cap are rejected; the kernel is written for the
/// small dense matrices this toolkit works with, not as a general library.
inline constexpr Eigen::Index kDefaultDimensionCap = 64;

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* name) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(name) + " has non-finite entries");
  }
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* name,
                    Eigen::Index cap) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(name) + " must be square, got " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  if (m.rows() < 1) {
    throw DimensionError(std::string(name) + " must be at least 1x1");
  }
  if (m.rows() > cap) {
    throw DimensionError(std::string(name) + " dimension " +
                         std::to_string(m.rows()) +
                         " exceeds the kernel cap of " + std::to_string(cap));
  }
}

}  // namespace detail

/// e^{M t} by scaling-and-squaring with the degree-13 diagonal Pade
/// approximant. The argument is scaled by 2^-s until its 1-norm is below
/// theta13 = 5.3719...; the approximant is then squared s times. This is
/// accurate to ~1e-13 relative for well-conditioned arguments.
template <typename Derived>
Eigen::MatrixX<typename Derived::Scalar> mat_exp(
    const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar t,
    Eigen::Index dimension_cap = kDefaultDimensionCap) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::MatrixX<Scalar>;

  detail::require_square(m, "mat_exp input", dimension_cap);
  detail::require_finite(m, "mat_exp input");
  if (!std::isfinite(static_cast<double>(t))) {
    throw ValidationError("mat_exp scale t must be finite");
  }

  const Eigen::Index n = m.rows();
  Mat a = m * t;

  // 1-norm threshold for the [13/13] approximant in double precision.
  constexpr double kTheta13 = 5.371920351148152;
  static constexpr double kPade13[] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};

  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    a /= std::pow(Scalar(2), squarings);
  }

  const Mat identity = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a2 * a4;

  const Mat u =
      a * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
           kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 +
           kPade13[1] * identity);
  const Mat v = a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) +
                kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 +
                kPade13[0] * identity;

  // (V - U)^-1 (V + U) written as I + 2 (V - U)^-1 U, which keeps the
  // result exact where the exponential is the identity.
  Mat result = identity + 2.0 * (v - u).partialPivLu().solve(u);
  for (int i = 0; i < squarings; ++i) {
    result = result * result;
  }
  return result;
}

template <typename Scalar>
struct ExpIntegral {
  Eigen::MatrixX<Scalar> exp;       // e^{A t}
  Eigen::VectorX<Scalar> integral;  // integral of e^{A s} b over [0, t]
};

/// Computes e^{At} and int_0^t e^{As} b ds together from a single
/// exponential of the (n+1)x(n+1) block matrix [[A, b], [0, 0]] (the Van
/// Loan construction): the top-left block is the exponential and the
/// top-right column is the integral.
template <typename DerivedA, typename DerivedB>
ExpIntegral<typename DerivedA::Scalar> exp_and_integral(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
    typename DerivedA::Scalar t,
    Eigen::Index dimension_cap = kDefaultDimensionCap) {
  using Scalar = typename DerivedA::Scalar;
  using Mat = Eigen::MatrixX<Scalar>;

  detail::require_square(a, "state matrix", dimension_cap);
  detail::require_finite(a, "state matrix");
  detail::require_finite(b, "input vector");
  if (b.cols() != 1 || b.rows() != a.rows()) {
    throw DimensionError("input vector length " + std::to_string(b.size()) +
                         " does not match state dimension " +
                         std::to_string(a.rows()));
  }
  if (!(t >= Scalar(0))) {
    throw ValidationError("integration time must be >= 0, got " +
                          std::to_string(static_cast<double>(t)));
  }

  const Eigen::Index n = a.rows();
  Mat block = Mat::Zero(n + 1, n + 1);
  block.topLeftCorner(n, n) = a;
  block.topRightCorner(n, 1) = b;

  const Mat e = mat_exp(block, t, dimension_cap + 1);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, 1)};
}

/// Largest eigenvalue modulus, via the real Schur decomposition (Hessenberg
/// reduction plus shifted QR, as done by Eigen's solver). Complex pairs are
/// handled; only moduli are reported.
template <typename Derived>
typename Derived::Scalar spectral_radius(
    const Eigen::MatrixBase<Derived>& m,
    Eigen::Index dimension_cap = kDefaultDimensionCap) {
  using Mat = Eigen::MatrixX<typename Derived::Scalar>;

  detail::require_square(m, "spectral_radius input", dimension_cap);
  detail::require_finite(m, "spectral_radius input");

  Eigen::EigenSolver<Mat> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(
        "eigenvalue iteration failed to converge for a " +
        std::to_string(m.rows()) + "x" + std::to_string(m.rows()) + " matrix");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace aircont

#endif  // AIRCONT_LINALG_HPP
