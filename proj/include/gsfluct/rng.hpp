#pragma once

#include <cmath>
#include <cstdint>

namespace gsfluct::rng {

// SplitMix64 output function. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// index-th word of the counter stream keyed by `seed`. Addressable: no
// predecessor state is needed, so workers can draw any element directly.
constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed + (index + 1) * kGolden);
}

// Key for an independent child stream.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + 0xA0761D6478BD642Full));
}

// Uniform double strictly inside (0, 1); both endpoints unreachable even
// after rounding (52-bit grid offset by half a step).
inline double uniform_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Uniform integer in [0, n). Lemire multiply-shift reduction.
constexpr std::uint64_t below(std::uint64_t seed, std::uint64_t index, std::uint64_t n) noexcept {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(at(seed, index)) * n) >> 64);
}

// Standard Gaussian addressable by (seed, index). Box-Muller, cosine branch;
// each index consumes two counter words.
inline double gaussian(std::uint64_t seed, std::uint64_t index) noexcept {
  const double u1 = uniform_open(at(seed, 2 * index));
  const double u2 = uniform_open(at(seed, 2 * index + 1));
  constexpr double two_pi = 6.283185307179586476925287;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// Fixed stream tags; keep values stable, they define reproducible outputs.
enum Stream : std::uint64_t {
  kDisorder = 1,
  kEdgeIncrements = 2,
  kSiteIncrements = 3,
  kConfigurations = 4,
  kSamples = 5,
  kTuples = 6,
};

// Seed of the j-th independent sample of an experiment keyed by `master`.
constexpr std::uint64_t sample_seed(std::uint64_t master, std::uint64_t j) noexcept {
  return at(derive(master, kSamples), j);
}

}  // namespace gsfluct::rng
