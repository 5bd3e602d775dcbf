#pragma once

#include <cstdint>
#include <random>

namespace mrw {

using Seed = std::uint64_t;
using Engine = std::mt19937_64;

/// Sub-stream tags. Each tag yields a statistically independent engine
/// from the same master seed.
enum class Stream : std::uint64_t {
  Omega = 1,
  Epsilon = 2,
  Ensemble = 3,
};

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr Seed derive_seed(Seed master, Stream stream, std::uint64_t index = 0) noexcept {
  return mix64(mix64(master ^ mix64(static_cast<std::uint64_t>(stream))) + index);
}

/// Seed of the i-th member of an ensemble driven by `master`.
constexpr Seed ensemble_seed(Seed master, std::uint64_t index) noexcept {
  return derive_seed(master, Stream::Ensemble, index);
}

inline Engine make_engine(Seed master, Stream stream) {
  return Engine(derive_seed(master, stream));
}

}  // namespace mrw
