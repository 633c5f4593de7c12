// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "parint/quantum.hpp"
#include "parint/random.hpp"

using namespace parint;
using std::numbers::pi;

namespace {

double fit_log2_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log2(x[i]);
    my += std::log2(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log2(x[i]) - mx) * (std::log2(x[i]) - mx);
    sxy += (std::log2(x[i]) - mx) * (std::log2(y[i]) - my);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("outcome count and error bound") {
  CHECK(qae_outcome_count(16) == 16);
  CHECK(qae_outcome_count(17) == 18);
  CHECK_THROWS_AS((void)qae_outcome_count(0), std::invalid_argument);
  CHECK(qae_error_bound(64, 0.5) == doctest::Approx(pi / 64 + pi * pi / 4096));
}

TEST_CASE("outcome distribution") {
  SplitMix64 gen(1);
  for (int i = 0; i < 100; ++i) {
    const double a = uniform01(gen);
    const std::uint64_t n = 1 + uniform_below(gen, 500);
    const auto p = qae_outcome_distribution(a, n);
    double sum = 0.0;
    for (double x : p) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }

  const auto zero = qae_outcome_distribution(0.0, 16);
  CHECK(zero[0] == doctest::Approx(1.0).epsilon(1e-15));

  // a on the outcome grid: all mass on y = 3 and its mirror M - 3, which give
  // the same estimate.
  const double a = std::pow(std::sin(pi * 3 / 16), 2);
  const auto grid = qae_outcome_distribution(a, 16);
  CHECK(grid[3] + grid[13] == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 50; ++i) {
    const auto y = qae_sample(a, 16, gen);
    CHECK((y == 3 || y == 13));
    CHECK(std::pow(std::sin(pi * static_cast<double>(y) / 16), 2) == doctest::Approx(a).epsilon(1e-15));
  }

  // a = 0.3: the outcomes adjacent to +-w M carry at least 8/pi^2.
  const auto p = qae_outcome_distribution(0.3, 16);
  const double c = std::asin(std::sqrt(0.3)) / pi * 16;
  const auto lo = static_cast<std::size_t>(std::floor(c));
  const double adjacent = p[lo] + p[lo + 1] + p[16 - lo] + p[16 - lo - 1];
  CHECK(adjacent >= 8 / (pi * pi));
}

TEST_CASE("sampler follows the outcome distribution") {
  SplitMix64 gen(99);
  const std::uint64_t n = 16;
  const auto p = qae_outcome_distribution(0.3, n);
  std::vector<double> freq(p.size(), 0.0);
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) freq[qae_sample(0.3, n, gen)] += 1.0 / draws;
  for (std::size_t y = 0; y < p.size(); ++y) CHECK(std::abs(freq[y] - p[y]) <= 0.01);
}

TEST_CASE("qae mean on constant arrays") {
  SplitMix64 gen(4);
  const std::vector<double> zeros(100, 0.0);
  const std::vector<double> ones(100, 1.0);
  for (int i = 0; i < 100; ++i) {
    CHECK(qae_mean(zeros, 33, gen) == 0.0);
    CHECK(qae_mean(ones, 33, gen) == doctest::Approx(1.0).epsilon(1e-15));
  }
  const std::vector<double> bad{0.5, 1.5};
  CHECK_THROWS_AS((void)qae_mean(bad, 8, gen), std::invalid_argument);
}

TEST_CASE("qae mean error contract on a random array") {
  SplitMix64 gen(77);
  std::vector<double> values(1024);
  for (auto& v : values) v = uniform01(gen);
  double a = 0.0;
  for (double v : values) a += v;
  a /= static_cast<double>(values.size());
  const double bound = qae_error_bound(64, a);
  int misses = 0;
  std::vector<double> errors;
  for (int i = 0; i < 2000; ++i) {
    const double e = std::abs(qae_mean(values, 64, gen) - a);
    errors.push_back(e);
    if (e > bound) ++misses;
  }
  CHECK(misses / 2000.0 <= 0.25);
  // median error constant, calibrated once
  CHECK(lower_median(errors) <= pi / 64);
}

TEST_CASE("outcome law depends only on the mean") {
  std::vector<double> spread{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<double> flat(6, 0.5);
  SplitMix64 g1(5), g2(5);
  for (int i = 0; i < 200; ++i) CHECK(qae_mean(spread, 40, g1) == qae_mean(flat, 40, g2));
}

TEST_CASE("classical subsample estimator") {
  SplitMix64 gen(8);
  std::vector<double> values{0.0, 1.0};
  const MeanEstimator est(10000, EstimatorMode::classical);
  CHECK(est.mode() == EstimatorMode::classical);
  CHECK(std::abs(est(values, gen) - 0.5) <= 0.03);
  CHECK_THROWS_AS(MeanEstimator(0), std::invalid_argument);
}

TEST_CASE("signed mean estimators") {
  SplitMix64 gen(12);
  // undithered: x = 0 sits on the grid when M is a multiple of 4
  for (int i = 0; i < 20; ++i) CHECK(std::abs(qae_signed_mean_plain(0.0, 64, gen)) <= 1e-12);
  int misses = 0;
  for (int i = 0; i < 2000; ++i) {
    const double x = 2 * uniform01(gen) - 1;
    if (std::abs(qae_signed_mean(x, 64, gen) - x) > 4 * qae_error_bound(64, 0.5)) ++misses;
  }
  CHECK(misses / 2000.0 <= 0.25);
  CHECK_THROWS_AS((void)qae_signed_mean(1.5, 64, gen), NormBoundViolation);
}

TEST_CASE("median boosting") {
  SplitMix64 gen(21);
  auto single = [&](std::uint64_t) { return uniform01(gen); };
  SplitMix64 copy = gen;
  const double one = median_boost(single, 1);
  CHECK(one == uniform01(copy));
  CHECK(median_boost([](std::uint64_t) { return 3.25; }, 7) == 3.25);
  CHECK(lower_median({4.0, 1.0, 3.0, 2.0}) == 2.0);
  CHECK_THROWS_AS((void)lower_median({}), std::invalid_argument);

  // Each run fails with probability 1/4; the median fails when half the runs do.
  auto failure_rate = [&](std::uint64_t m) {
    int failures = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const double med = median_boost([&](std::uint64_t) { return uniform01(gen) < 0.25 ? 1.0 : 0.0; }, m);
      if (med != 0.0) ++failures;
    }
    return failures / 10000.0;
  };
  CHECK(failure_rate(25) <= std::exp(-25.0 / 8) + 0.01);
  double prev = 1.0;
  for (std::uint64_t m : {1u, 5u, 9u, 17u, 25u}) {
    const double rate = failure_rate(m);
    CHECK(rate <= prev + 0.01);
    prev = rate;
  }
}

TEST_CASE("query ledger") {
  QueryLedger ledger;
  CHECK(ledger.total() == 0);
  ledger.charge(1, Phase::start, 3);
  ledger.charge(2, Phase::fine, 4);
  ledger.charge(2, Phase::fine, 5);
  CHECK(ledger.total() == 12);
  CHECK(ledger.level_total(2) == 9);
  CHECK(ledger.phase_total(Phase::start) == 3);
  QueryLedger other;
  other.charge(1, Phase::start, 1);
  ledger.merge(other);
  CHECK(ledger.total() == 13);
  CHECK(to_string(Phase::fine) == "fine");
  CHECK_THROWS_AS(ledger.charge(0, Phase::start, std::numeric_limits<std::uint64_t>::max()), std::overflow_error);
  CHECK(ledger.total() == 13);
  CHECK(quantum_query_factor(3) == 8);
}

TEST_CASE("quantum integration of polynomials and constants is exact") {
  SplitMix64 gen(31);
  QueryLedger ledger;
  auto poly = [](std::span<const double> t) { return 1.0 + t[0] * t[0] - 0.5 * t[0]; };
  for (int i = 0; i < 10; ++i) {
    CHECK(quantum_integrate(poly, 2, 1, 1.0, 64, gen, &ledger, 0) == doctest::Approx(1.0 + 1.0 / 3 - 0.25).epsilon(1e-14));
    CHECK(quantum_integrate([](auto) { return 0.5; }, 2, 1, 1.0, 64, gen) == 0.5);
  }
  CHECK(ledger.total() == 640);
  CHECK(ledger.phase_total(Phase::start) == 640);
  auto poly2 = [](std::span<const double> t) { return t[0] * t[1] * t[1]; };
  CHECK(quantum_integrate(poly2, 2, 2, 1.0, 200, gen) == doctest::Approx(1.0 / 6).epsilon(1e-14));
}

TEST_CASE("quantum integration rate on a smooth function") {
  const auto g = [](std::span<const double> t) { return std::sin(2 * pi * t[0]); };
  std::vector<double> ns, errs;
  for (int e = 5; e <= 9; ++e) {
    const std::uint64_t n = std::uint64_t{1} << e;
    const auto plan = plan_quantum_integrate(g, 2, 1, 4 * pi * pi, n);
    std::vector<double> err;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      SplitMix64 gen(trial_seed(2, seed));
      err.push_back(std::abs(sample_quantum_integrate(plan, gen)));
    }
    ns.push_back(static_cast<double>(n));
    errs.push_back(lower_median(err));
  }
  const double slope = fit_log2_slope(ns, errs);
  MESSAGE("quantum integration slope " << slope);
  CHECK(slope == doctest::Approx(-3.0).epsilon(0.4 / 3.0));
}

TEST_CASE("quantum integration guards the declared norm") {
  SplitMix64 gen(1);
  const auto g = [](std::span<const double> t) { return std::sin(2 * pi * t[0]); };
  CHECK_THROWS_AS((void)quantum_integrate(g, 2, 1, 1e-6, 64, gen), NormBoundViolation);
  CHECK_THROWS_AS((void)quantum_integrate(g, 2, 1, 1.0, 0, gen), std::invalid_argument);
  // below the smallest mesh the whole function is the residual
  const auto plan = plan_quantum_integrate(g, 2, 1, 1.0, 4);
  CHECK_FALSE(plan.mesh.has_value());
  CHECK(plan.residual_budget == 4);
}
