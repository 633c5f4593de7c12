// SPDX-License-Identifier: Apache-2.0
#include "parint/random.hpp"

#include <stdexcept>

namespace parint {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t uniform_below(SplitMix64& gen, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  u128 product = static_cast<u128>(gen()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<u128>(gen()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

SplitMix64 RandomSource::stream(std::uint64_t level, std::uint64_t node,
                                std::uint64_t repetition) const noexcept {
  constexpr std::uint64_t c = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key = mix64(seed_);
  key = mix64(key ^ (level + c));
  key = mix64(key ^ (node + 2 * c));
  key = mix64(key ^ (repetition + 3 * c));
  return SplitMix64(key);
}

}  // namespace parint
