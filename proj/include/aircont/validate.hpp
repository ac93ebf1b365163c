#ifndef AIRCONT_VALIDATE_HPP
#define AIRCONT_VALIDATE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace aircont {

/// Knobs for the self-check suite. `mse_air_bias` multiplies the closed-form
/// air MSE by (1 + bias) inside the closed-form-vs-empirical check; tests use
/// it to confirm the check actually has teeth.
struct ValidateOptions {
  double mse_air_bias = 0.0;
  long mc_samples = 400000;
  int instances = 4;
  std::uint64_t seed = 0x5eedful;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast cross-checks of the numerical core against independent oracles:
/// quadrature vs the Van Loan integrals, Taylor series vs the Pade
/// exponential, power iteration vs the Schur spectral radius, grid search
/// vs both scaling optimizers, and Monte Carlo vs both closed-form MSEs.
std::vector<CheckResult> run_validation(const ValidateOptions& options = {});

}  // namespace aircont

#endif  // AIRCONT_VALIDATE_HPP
