#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace pssim {

/// Deterministic, splittable random source: xoshiro256** seeded through
/// SplitMix64. All variate generation (uniform, normal, Poisson) is done
/// here rather than by <random> distributions, whose output is not
/// specified by the standard and differs between library vendors.
///
/// Sub-streams: split(k) derives an independent generator from the
/// construction seed and k only, never from the current state, so the
/// draws of one pipeline stage cannot perturb another, and per-item
/// streams give identical results in serial and parallel loops.
class RandomSource {
 public:
  static constexpr std::string_view kAlgorithm = "xoshiro256**/splitmix64";
  static constexpr int kVersion = 1;

  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  RandomSource split(std::uint64_t stream) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform01();
  /// Uniform on (0, 1).
  double uniform_open01();
  /// Uniform integer in [0, bound). bound must be >= 1.
  std::uint64_t uniform_index(std::uint64_t bound);
  double normal();
  std::uint64_t poisson(double lambda);

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

/// Mixes a 64-bit value (the SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

}  // namespace pssim
