// SPDX-License-Identifier: Apache-2.0
//
// Classical comparison algorithms.
#pragma once

#include <cstdint>

#include "parint/function.hpp"
#include "parint/grid.hpp"
#include "parint/multilevel.hpp"

namespace parint {

struct DeterministicResult {
  PiecewiseLagrange approximation;
  std::uint64_t queries = 0;
};

/// Tensor grid in (s, t) at the largest level k with (r 2^k + 1)^{d1+d2} <= n:
/// for every parameter node the composite degree-r Newton-Cotes rule in t,
/// then degree-r interpolation in s. Throws std::invalid_argument when n is
/// below (r+1)^{d1+d2}.
[[nodiscard]] DeterministicResult deterministic_baseline(const SmoothFunction& f, std::uint64_t n);

/// Multilevel Monte Carlo: the multilevel driver with the classical sample
/// mean in place of amplitude estimation and the schedule of
/// build_mc_schedule. A simplified stand-in for the optimal randomized method.
[[nodiscard]] ParintResult mc_baseline(const SmoothFunction& f, std::uint64_t n, std::uint64_t seed,
                                       ParintOptions opts = {});

}  // namespace parint
