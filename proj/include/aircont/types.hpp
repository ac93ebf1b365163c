#ifndef AIRCONT_TYPES_HPP
#define AIRCONT_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace aircont {

inline constexpr const char* kVersion = "0.1.0";

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Control-signal computation scheme. `ideal` is the zero-delay, noise-free
/// reference; `air` computes the weighted sum over the multiple-access
/// channel in one slot; `sota` is the per-sensor-slot multi-hop baseline.
enum class Scheme { ideal, air, sota };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ideal: return "ideal";
    case Scheme::air: return "air";
    case Scheme::sota: return "sota";
  }
  return "?";
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad values or broken preconditions in inputs (maps to exit code 1).
struct ValidationError : Error {
  using Error::Error;
};

struct DimensionError : ValidationError {
  using ValidationError::ValidationError;
};

/// Timing constraint violations (delay longer than sampling period, etc).
struct FeasibilityError : ValidationError {
  using ValidationError::ValidationError;
};

struct DegenerateChannelError : ValidationError {
  using ValidationError::ValidationError;
};

/// Config file problems: parse errors, unknown keys, missing sections.
struct ConfigError : ValidationError {
  using ValidationError::ValidationError;
};

/// Iteration failures and other runtime numerical trouble (exit code 2).
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace aircont

#endif  // AIRCONT_TYPES_HPP
