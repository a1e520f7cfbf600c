#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace madrl {

/// Every stochastic component draws from an injected generator of this type.
using Rng = std::mt19937_64;

/// Generator seeded from a list of integers (run seed, epoch, sample index...).
inline Rng make_rng(std::initializer_list<std::uint64_t> words) {
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform_real(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool bernoulli(Rng& rng, double p) {
  return uniform_real(rng) < p;
}

}  // namespace madrl
