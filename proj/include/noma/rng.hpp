// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace noma::rng {

using Engine = std::mt19937_64;

// One SplitMix64 step. Used to spread (seed, stream) pairs over 64 bits so
// that substreams of the same master seed are statistically independent.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Engine for substream `stream` of master seed `seed`. mt19937_64 seeded
// with a single value is fully specified by the standard, so every platform
// and worker count produces the same draws for the same (seed, stream).
inline Engine make_stream(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t mixed = splitmix64(seed ^ splitmix64(stream));
  return Engine(mixed);
}

// Uniform draw on the open interval (0,1): 53-bit resolution, never 0 or 1,
// so logs and inverse CDFs are always finite.
inline double uniform01(Engine& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via the Marsaglia polar method.
inline double normal(Engine& g) {
  for (;;) {
    const double u = 2.0 * uniform01(g) - 1.0;
    const double v = 2.0 * uniform01(g) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

}  // namespace noma::rng
