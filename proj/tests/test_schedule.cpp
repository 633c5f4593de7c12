// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "parint/schedule.hpp"

using namespace parint;

TEST_CASE("schedule for n = 1024, r = 2, d1 = d2 = 1") {
  const auto s = build_schedule(1024, 2, 1, 1);
  CHECK(s.m == 6);
  CHECK(s.m_tilde == 6);
  CHECK(s.l == 9);
  const auto& l6 = s.level(6);
  CHECK(l6.n1 == 129);
  CHECK(l6.n2 == 64);
  REQUIRE(l6.summands.has_value());
  CHECK(*l6.summands == (std::uint64_t{1} << 18));
  CHECK(l6.repetitions == 89);
  CHECK(s.theta_sum() == std::ldexp(1.0, -9) + std::ldexp(1.0, -10) + std::ldexp(1.0, -11) + std::ldexp(1.0, -12));
  CHECK(s.theta_sum() <= 0.25);
  CHECK(s.v == 3);
  // n_{2,k} = ceil(2^{m - 3(k-m)/2})
  CHECK(s.level(7).n2 == 23);
  CHECK(s.level(8).n2 == 8);
  CHECK(s.level(9).n2 == 3);
}

TEST_CASE("schedule for n = 4096, r = 1, d1 = 2, d2 = 1") {
  const auto s = build_schedule(4096, 1, 2, 1);
  CHECK(s.m == 5);
  CHECK(s.m_tilde == 0);
  CHECK(s.p == 1);
  CHECK(s.l == 7);
  CHECK(s.levels.size() == 8);
}

TEST_CASE("schedule invariants") {
  for (int r = 1; r <= 3; ++r)
    for (int d1 = 1; d1 <= 2; ++d1)
      for (int d2 = 1; d2 <= 2; ++d2)
        for (int e = 2; e <= 16; e += 2) {
          const std::uint64_t n = std::uint64_t{1} << e;
          for (const auto& s : {build_schedule(n, r, d1, d2), build_mc_schedule(n, r, d1, d2)}) {
            CHECK(s.m == e / (d1 + d2) + 1);
            CHECK(s.l >= s.m_tilde);
            CHECK(s.theta_sum() <= 0.25);
            std::uint64_t total = 0;
            std::uint64_t prev_n1 = 0;
            const std::uint64_t factor = s.mode == EstimatorMode::amplitude ? 2 * (s.v + 1) : s.v + 1;
            for (const auto& lp : s.levels) {
              CHECK(lp.n1 == static_cast<std::uint64_t>(std::llround(std::pow(r * std::ldexp(1.0, lp.k) + 1, d1))));
              const double reps = std::ceil(8 * (lp.k + 3) * std::log(2.0) + 8 * std::log(static_cast<double>(lp.n1)));
              CHECK(static_cast<double>(lp.repetitions) == reps);
              CHECK(static_cast<double>(lp.n1) * std::exp(-static_cast<double>(lp.repetitions) / 8) <=
                    std::ldexp(1.0, -(lp.k + 3)));
              CHECK(lp.theta == std::ldexp(1.0, -(lp.k + 3)));
              CHECK(lp.base == (lp.n2 << (r * lp.k)));
              CHECK(lp.log2_summands == doctest::Approx(d2 * (r * lp.k + std::log2(static_cast<double>(lp.n2)))));
              const std::uint64_t charge = lp.k == s.m_tilde ? lp.repetitions * lp.n1 * lp.n2
                                                             : lp.repetitions * (lp.n1 - prev_n1) * factor * lp.n2;
              CHECK(lp.charged == charge);
              total += charge;
              prev_n1 = lp.n1;
            }
            CHECK(s.total == total);
          }
        }
}

TEST_CASE("quantum budgets follow the closed forms") {
  // r >= d1: n2 = ceil(2^{d2 m - (r + d1)(k - m)/2})
  const auto s = build_schedule(1u << 14, 3, 1, 2);
  for (const auto& lp : s.levels) {
    const double e = s.d2 * s.m - (s.r + s.d1) * (lp.k - s.m) / 2.0;
    CHECK(lp.n2 == static_cast<std::uint64_t>(std::max(1.0, std::ceil(std::exp2(e)))));
  }
  // r < d1: n2 = ceil(M_k^{-1} 2^{(d1+d2) m - d1 k - (d1 - r)(l - k)/2})
  const auto t = build_schedule(1u << 15, 1, 2, 1);
  for (const auto& lp : t.levels) {
    const double e = (t.d1 + t.d2) * t.m - t.d1 * lp.k - (t.d1 - t.r) * (t.l - lp.k) / 2.0;
    CHECK(lp.n2 == static_cast<std::uint64_t>(std::max(1.0, std::ceil(std::exp2(e) / lp.repetitions))));
  }
}

TEST_CASE("r = d1 uses the coarse-start branch") {
  const auto s = build_schedule(4096, 2, 2, 1);
  CHECK(s.m_tilde == s.m);
  CHECK(s.l == (3 * s.m + 1) / 2);
}

TEST_CASE("classical schedule") {
  const auto s = build_mc_schedule(1024, 2, 1, 1);
  CHECK(s.mode == EstimatorMode::classical);
  CHECK(s.m_tilde == 6);
  CHECK(s.l == 8);  // ceil(5/4 * 6)
  CHECK(s.level(6).n2 == 64);
  CHECK(s.level(7).n2 == 12);  // ceil(2^{6 - 5/2})
  const auto t = build_mc_schedule(4096, 1, 2, 1);
  CHECK(t.m_tilde == 0);
}

TEST_CASE("schedule argument checks") {
  CHECK_THROWS_AS((void)build_schedule(3, 2, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)build_schedule(1024, 0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)build_schedule(1024, 2, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)build_mc_schedule(2, 2, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)build_schedule(std::uint64_t{1} << 62, 8, 1, 6), std::overflow_error);
  CHECK_THROWS_AS((void)build_schedule(1024, 2, 1, 1).level(3), std::out_of_range);
}
