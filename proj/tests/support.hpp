#pragma once

#include <random>

#include "tcq/game.hpp"
#include "tcq/strategies.hpp"

namespace tcq::testing {

inline SynchronousStrategy random_strategy(const LinearCode& code, std::size_t m, std::size_t r, std::uint64_t seed) {
  return random_projective_strategy(code, m, r, seed);
}

inline Vec random_state(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vec v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return v / v.norm();
}

inline BipartiteStrategy random_bipartite(const LinearCode& code, std::size_t m, std::size_t rA, std::size_t rB,
                                          std::uint64_t seed) {
  return {random_strategy(code, m, rA, seed), random_strategy(code, m, rB, seed + 7777), random_state(rA * rB, seed)};
}

inline TensorCodeword random_tensor_codeword(const LinearCode& code, std::size_t m, std::uint64_t seed) {
  return planted_codeword(code, m, seed);
}

}  // namespace tcq::testing
