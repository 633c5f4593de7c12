// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "parint/quantum.hpp"

namespace parint {

/// Per-level parameters of the multilevel algorithm.
struct LevelParams {
  int k = 0;
  std::uint64_t n1 = 0;    // (r 2^k + 1)^{d1} parameter nodes
  std::uint64_t n2 = 0;    // estimator budget per run
  std::uint64_t base = 0;  // 2^{rk} n2, rectangle-rule digits per axis
  std::optional<std::uint64_t> summands;  // N_k = base^{d2} when it fits
  double log2_summands = 0.0;
  std::uint64_t repetitions = 0;  // M_k
  double theta = 0.0;             // 2^{-(k+3)}
  std::uint64_t charged = 0;      // nhat_k
};

struct LevelSchedule {
  std::uint64_t n = 0;
  int r = 1;
  int d1 = 1;
  int d2 = 1;
  EstimatorMode mode = EstimatorMode::amplitude;
  int m = 0;
  int m_tilde = 0;
  int l = 0;
  int p = 0;
  std::uint64_t v = 0;  // (r+1)^{d1}
  std::vector<LevelParams> levels;  // k = m_tilde .. l
  std::uint64_t total = 0;          // ntilde

  [[nodiscard]] const LevelParams& level(int k) const;
  [[nodiscard]] double theta_sum() const noexcept;
};

/// Parameters of the quantum algorithm:
///
///   m      = floor(log2(n) / (d1 + d2) + 1)
///   m~     = m if r >= d1, else 0
///   l      = ceil((1 + d2/r) m)                      if r >= d1
///          = ceil((1 + d2/d1) m) - floor(log2(m)/d1)  otherwise, at least m~
///   M_k    = ceil(8 (k+3) ln 2 + 8 ln n_{1,k})
///   n_{2,k} = ceil(2^{d2 m - (r+d1)(k-m)/2})                                if r >= d1
///          = ceil(M_k^{-1} 2^{(d1+d2) m - d1 k - (d1-r)(l-k)/2})          otherwise
///   nhat_m~ = M n_1 n_2,  nhat_k = M_k (n_{1,k} - n_{1,k-1}) 2(v+1) n_{2,k}
///
/// Throws std::invalid_argument for n < 4 or invalid dimensions and
/// std::overflow_error when a count does not fit in 64 bits.
[[nodiscard]] LevelSchedule build_schedule(std::uint64_t n, int r, int d1, int d2);

/// Classical Monte Carlo counterpart. Variance decays like 2^{-2rk}/n2, so
/// the balance exponent uses r + d1/2 in place of (r + d1)/2:
///
///   2r > d1: m~ = m, l = ceil((1 + d2/(2r)) m),
///            n_{2,k} = ceil(2^{d2 m - (r + d1/2)(k-m)})
///   else:    m~ = 0, l as in the quantum r < d1 branch,
///            n_{2,k} = ceil(M_k^{-1} 2^{(d1+d2) m - d1 k - (d1/2 - r)(l-k)})
///
/// Fine-level runs charge (v+1) n_{2,k}: no uncomputation is needed.
[[nodiscard]] LevelSchedule build_mc_schedule(std::uint64_t n, int r, int d1, int d2);

}  // namespace parint
