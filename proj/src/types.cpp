#include "memwave/types.hpp"

#include <cmath>

namespace memwave {

Vec seeded_coefficients(Index n, std::uint64_t seed) {
  Vec out(n);
  std::uint64_t state = seed;
  for (Index i = 0; i < n; ++i) {
    const std::uint64_t bits = splitmix64(state);
    const double unit = std::ldexp(static_cast<double>(bits >> 11), -53);
    out[i] = 2.0 * unit - 1.0;
  }
  return out;
}

}  // namespace memwave
