// SPDX-License-Identifier: Apache-2.0
#include "parint/schedule.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace parint {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kMax / a) throw std::overflow_error("schedule count overflows 64 bits");
  return a * b;
}

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  if (b > kMax - a) throw std::overflow_error("schedule count overflows 64 bits");
  return a + b;
}

long ceil_div(long a, long b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

std::uint64_t ipow(std::uint64_t base, int e) {
  std::uint64_t out = 1;
  for (int i = 0; i < e; ++i) out = mul(out, base);
  return out;
}

// ceil(2^{e2/2} / div) for an integer twice-exponent e2.
std::uint64_t ceil_pow2_half(long e2, std::uint64_t div) {
  if (e2 < 0) return 1;
  if (e2 % 2 == 0) {
    const long e = e2 / 2;
    if (e >= 63) throw std::overflow_error("estimator budget overflows 64 bits");
    const std::uint64_t num = std::uint64_t{1} << e;
    return std::max<std::uint64_t>(1, (num + div - 1) / div);
  }
  const double v = std::ceil(std::exp2(0.5 * static_cast<double>(e2)) / static_cast<double>(div));
  if (v >= 0x1.0p63) throw std::overflow_error("estimator budget overflows 64 bits");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(v));
}

std::uint64_t repetitions(int k, std::uint64_t n1) {
  return static_cast<std::uint64_t>(
      std::ceil(8.0 * (k + 3) * std::log(2.0) + 8.0 * std::log(static_cast<double>(n1))));
}

void check_args(std::uint64_t n, int r, int d1, int d2) {
  if (n < 4) throw std::invalid_argument("budget n must be at least 4");
  if (r < 1 || r > kMaxDegree) throw std::invalid_argument("smoothness order out of range");
  if (d1 < 1 || d1 > kMaxDimension || d2 < 1 || d2 > kMaxDimension)
    throw std::invalid_argument("dimension out of range");
}

int floor_log2(std::uint64_t x) { return static_cast<int>(std::bit_width(x)) - 1; }

template <class N2>
void fill_levels(LevelSchedule& s, std::uint64_t query_factor, N2&& n2_of) {
  s.v = ipow(static_cast<std::uint64_t>(s.r) + 1, s.d1);
  s.levels.clear();
  s.total = 0;
  std::uint64_t prev_n1 = 0;
  for (int k = s.m_tilde; k <= s.l; ++k) {
    LevelParams lp;
    lp.k = k;
    lp.n1 = MeshSpec{k, s.r, s.d1}.point_count();
    lp.repetitions = repetitions(k, lp.n1);
    lp.n2 = n2_of(k, lp.repetitions);
    const long shift = static_cast<long>(s.r) * k;
    if (shift >= 64 || (lp.n2 >> (63 - shift)) != 0) throw std::overflow_error("rectangle-rule base overflows");
    lp.base = lp.n2 << shift;
    lp.log2_summands = s.d2 * std::log2(static_cast<double>(lp.base));
    try {
      lp.summands = ipow(lp.base, s.d2);
    } catch (const std::overflow_error&) {
      lp.summands.reset();
    }
    lp.theta = std::ldexp(1.0, -(k + 3));
    if (k == s.m_tilde) {
      lp.charged = mul(mul(lp.repetitions, lp.n1), lp.n2);
    } else {
      lp.charged = mul(mul(mul(lp.repetitions, lp.n1 - prev_n1), query_factor), lp.n2);
    }
    s.total = add(s.total, lp.charged);
    prev_n1 = lp.n1;
    s.levels.push_back(lp);
  }
}

}  // namespace

const LevelParams& LevelSchedule::level(int k) const {
  if (k < m_tilde || k > l) throw std::out_of_range("level outside the schedule");
  return levels[static_cast<std::size_t>(k - m_tilde)];
}

double LevelSchedule::theta_sum() const noexcept {
  double acc = 0.0;
  for (const auto& lp : levels) acc += lp.theta;
  return acc;
}

LevelSchedule build_schedule(std::uint64_t n, int r, int d1, int d2) {
  check_args(n, r, d1, d2);
  LevelSchedule s;
  s.n = n;
  s.r = r;
  s.d1 = d1;
  s.d2 = d2;
  s.mode = EstimatorMode::amplitude;
  s.m = floor_log2(n) / (d1 + d2) + 1;
  if (r >= d1) {
    s.m_tilde = s.m;
    s.l = static_cast<int>(ceil_div(static_cast<long>(r + d2) * s.m, r));
  } else {
    s.m_tilde = 0;
    s.p = floor_log2(static_cast<std::uint64_t>(s.m)) / d1;
    s.l = static_cast<int>(ceil_div(static_cast<long>(d1 + d2) * s.m, d1)) - s.p;
  }
  s.l = std::max(s.l, s.m_tilde);

  const long m = s.m;
  const long l = s.l;
  fill_levels(s, quantum_query_factor(ipow(static_cast<std::uint64_t>(r) + 1, d1)),
              [&](int k, std::uint64_t reps) {
                if (r >= d1) return ceil_pow2_half(2L * d2 * m - static_cast<long>(r + d1) * (k - m), 1);
                return ceil_pow2_half(2L * (d1 + d2) * m - 2L * d1 * k - static_cast<long>(d1 - r) * (l - k), reps);
              });
  return s;
}

LevelSchedule build_mc_schedule(std::uint64_t n, int r, int d1, int d2) {
  check_args(n, r, d1, d2);
  LevelSchedule s;
  s.n = n;
  s.r = r;
  s.d1 = d1;
  s.d2 = d2;
  s.mode = EstimatorMode::classical;
  s.m = floor_log2(n) / (d1 + d2) + 1;
  const bool coarse_start = 2 * r > d1;
  if (coarse_start) {
    s.m_tilde = s.m;
    s.l = static_cast<int>(ceil_div(static_cast<long>(2 * r + d2) * s.m, 2L * r));
  } else {
    s.m_tilde = 0;
    s.p = floor_log2(static_cast<std::uint64_t>(s.m)) / d1;
    s.l = static_cast<int>(ceil_div(static_cast<long>(d1 + d2) * s.m, d1)) - s.p;
  }
  s.l = std::max(s.l, s.m_tilde);

  const long m = s.m;
  const long l = s.l;
  fill_levels(s, ipow(static_cast<std::uint64_t>(r) + 1, d1) + 1, [&](int k, std::uint64_t reps) {
    if (coarse_start) return ceil_pow2_half(2L * d2 * m - static_cast<long>(2 * r + d1) * (k - m), 1);
    return ceil_pow2_half(2L * (d1 + d2) * m - 2L * d1 * k - static_cast<long>(d1 - 2 * r) * (l - k), reps);
  });
  return s;
}

}  // namespace parint
