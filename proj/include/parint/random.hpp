// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>

namespace parint {

/// SplitMix64 finalizer. Bijective on 64-bit words.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Small counter-based generator satisfying UniformRandomBitGenerator.
/// Output is fully specified, so seeded runs are bit-identical across
/// platforms and standard libraries.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t state = 0) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

/// Uniform double in [0, 1) from the top 53 bits.
[[nodiscard]] inline double uniform01(SplitMix64& gen) noexcept {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
[[nodiscard]] std::uint64_t uniform_below(SplitMix64& gen, std::uint64_t bound);

/// Splittable seed source. Every estimator run draws from its own stream keyed
/// by (level, node, repetition):
///
///   key = mix64(mix64(mix64(mix64(seed) ^ (level + C)) ^ (node + 2C)) ^ (rep + 3C))
///
/// with C = 0x9E3779B97F4A7C15. The stream is SplitMix64 started at `key`.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) noexcept : seed_(seed) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  [[nodiscard]] SplitMix64 stream(std::uint64_t level, std::uint64_t node,
                                  std::uint64_t repetition) const noexcept;

 private:
  std::uint64_t seed_;
};

/// Seed used for trial `trial` of a sweep started from `base`.
[[nodiscard]] constexpr std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) noexcept {
  return mix64(base ^ mix64(trial + 0x632BE59BD9B4E019ULL));
}

}  // namespace parint
