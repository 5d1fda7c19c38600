#pragma once

#include "oacsim/types.hpp"

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace oacsim {

// Counter-based stream derivation: a stream is fully determined by the master
// seed and a tuple of counters (trial index, grid indices, purpose tag), so
// trials can run in any order or on any thread and still draw identical
// numbers.
inline Rng derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> counters) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * counters.size());
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master_seed);
  for (auto c : counters) push(c);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// Circular complex Gaussian CN(0, variance): independent real and imaginary
/// parts, each with variance `variance / 2`.
inline Complex draw_circular_gaussian(Rng& rng, double variance) {
  std::normal_distribution<double> unit(0.0, 1.0);
  const double sd = std::sqrt(0.5 * variance);
  const double re = unit(rng);
  const double im = unit(rng);
  return {sd * re, sd * im};
}

}  // namespace oacsim
