#ifndef AIRCONT_RNG_HPP
#define AIRCONT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

// Reproducible random streams. Every randomized computation derives its own
// stream from (root seed, structural coordinates) so results do not depend
// on evaluation order or thread count. All distributions are implemented on
// top of the raw 64-bit engine output; nothing here depends on
// implementation-defined standard library distributions.

namespace aircont {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Hashes a root seed and a list of coordinate values into a stream key.
inline std::uint64_t derive_stream_key(std::uint64_t seed,
                                       std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = detail::mix64(seed ^ 0x853c49e6748fea9bULL);
  for (std::uint64_t p : parts) {
    h = detail::mix64(h ^ detail::mix64(p));
  }
  return h;
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : engine_(key) {}

  /// Uniform on [0, 1), 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]; safe to pass to log().
  double uniform01_positive() { return 1.0 - uniform01(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; consumes exactly two engine draws.
  double normal() {
    const double u1 = uniform01_positive();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Rayleigh draw normalized so that E[x^2] = 1 (the squared magnitude is
  /// exponential with unit mean).
  double rayleigh_unit() { return std::sqrt(-std::log(uniform01_positive())); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aircont

#endif  // AIRCONT_RNG_HPP
