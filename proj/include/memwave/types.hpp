#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace memwave {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using Vec = Vector<double>;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

// splitmix64: portable integer-only generator for seed-fixed test data.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// n doubles in [-1, 1), bit-identical on any platform for a given seed.
Vec seeded_coefficients(Index n, std::uint64_t seed);

}  // namespace memwave
