#pragma once

#include <cstdint>
#include <random>

namespace bco {

using Rng = std::mt19937_64;

// 53-bit uniform draw in [0, 1); bit-stable across platforms, unlike the
// distribution adaptors in <random>.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(Rng& rng, double a, double b) {
  return a + (b - a) * uniform01(rng);
}

// Uniform sign in {-1, +1}.
inline int rademacher(Rng& rng) { return (rng() & 1ull) ? +1 : -1; }

}  // namespace bco
