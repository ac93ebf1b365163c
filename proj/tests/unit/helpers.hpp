#ifndef AIRCONT_TESTS_HELPERS_HPP
#define AIRCONT_TESTS_HELPERS_HPP

#include "aircont/rng.hpp"
#include "aircont/scaling.hpp"
#include "aircont/types.hpp"

namespace aircont::testing {

inline Matrix random_matrix(RngStream& stream, int n, double scale = 1.0) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = stream.uniform(-scale, scale);
  return m;
}

inline Vector random_vector(RngStream& stream, int n, double lo = -1.0,
                            double hi = 1.0) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = stream.uniform(lo, hi);
  return v;
}

inline ChannelRealization random_channel(RngStream& stream, int n) {
  Vector h(n);
  for (int i = 0; i < n; ++i) h(i) = 0.1 + stream.rayleigh_unit();
  return make_channel(h, 0.1 + stream.rayleigh_unit(),
                      stream.uniform(0.05, 1.0), stream.uniform(0.05, 1.0),
                      stream.uniform(0.05, 1.0), stream.uniform(0.2, 5.0));
}

}  // namespace aircont::testing

#endif  // AIRCONT_TESTS_HELPERS_HPP
