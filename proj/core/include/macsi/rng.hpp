#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace macsi {

// Deterministic random source. Everything randomized in the library draws
// through this wrapper so that results depend only on the seed, never on the
// (implementation-defined) internals of std::*_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n >= 1.
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

  // Standard exponential via inversion. Finite for every draw since
  // uniform01() < 1.
  double exponential() { return -std::log1p(-uniform01()); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace macsi
