#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace disruptix {

// All randomized components draw from mt19937_64 through these helpers
// instead of <random> distributions, whose output is not pinned by the
// standard. This keeps seeded results identical across compilers.
using Rng = std::mt19937_64;

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // Multiply-shift with rejection (Lemire); unbiased for any bound >= 1
  // and division-free on the hot path.
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Index draw from cumulative-normalized weights via linear scan.
inline std::size_t categorical(Rng& rng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double x = uniform01(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (x < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace disruptix
