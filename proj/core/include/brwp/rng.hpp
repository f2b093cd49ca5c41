#pragma once

#include <cmath>
#include <cstdint>

namespace brwp::rng {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter). Draws are therefore reproducible bit-for-bit
// regardless of evaluation order, which keeps results identical if callers
// later parallelize over particles or dimensions. The word function applies
// the splitmix64 finalizer twice with distinct odd constants folding in the
// stream and counter, which is enough avalanche for the statistical load
// here (initialization noise, Langevin noise, synthetic data).

// Fixed stream identifiers so independent consumers of one experiment seed
// never collide.
enum class Stream : std::uint64_t {
  init_ensemble = 1,
  myula_noise = 2,
  mixture_centers = 3,
  logistic_data = 4,
  imaging_noise = 5,
  validation = 6,
  cs_data = 7,
  power_iteration = 8,
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t word(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t counter) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = mix64(z);
  z += 0xD1B54A32D192ED03ull * (counter + 1);
  return mix64(z);
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t counter) {
  return static_cast<double>(word(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two counter-indexed uniforms, so draw k
// consumes counters 2k and 2k+1. The first uniform is nudged away from zero
// to keep the logarithm finite.
inline double normal(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t counter) {
  double u1 = uniform01(seed, stream, 2 * counter);
  double u2 = uniform01(seed, stream, 2 * counter + 1);
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline double uniform01(std::uint64_t seed, Stream stream,
                        std::uint64_t counter) {
  return uniform01(seed, static_cast<std::uint64_t>(stream), counter);
}

inline double normal(std::uint64_t seed, Stream stream,
                     std::uint64_t counter) {
  return normal(seed, static_cast<std::uint64_t>(stream), counter);
}

}  // namespace brwp::rng
