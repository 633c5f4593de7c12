// SPDX-License-Identifier: Apache-2.0
//
// Classically simulated quantum mean estimation, median boosting, query
// accounting and single-function quantum integration.
//
// Amplitude estimation is simulated through its exact measurement law. With a
// budget of n oracle calls the phase register has M = n (n even) or n + 1 (n
// odd) outcomes, so M - 1 <= n Grover iterations are applied. For a = sin^2(pi w)
// the outcome y in [0, M) has probability
//
//   P(y) = F(y/M - w)/2 + F(y/M + w)/2,   F(x) = sin^2(M pi x) / (M^2 sin^2(pi x))
//
// and the estimate is sin^2(pi y / M).
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parint/grid.hpp"
#include "parint/random.hpp"

namespace parint {

/// Raised when sampled values exceed the bound an estimator was scaled by.
class NormBoundViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of phase outcomes M for a budget of n queries.
[[nodiscard]] std::uint64_t qae_outcome_count(std::uint64_t n);

/// 2 pi sqrt(a(1-a)) / n + pi^2 / n^2.
[[nodiscard]] double qae_error_bound(std::uint64_t n, double a);

/// Exact outcome law over y in [0, M). Sums to 1.
[[nodiscard]] std::vector<double> qae_outcome_distribution(double a, std::uint64_t n);

/// One draw of the outcome index y.
[[nodiscard]] std::uint64_t qae_sample(double a, std::uint64_t n, SplitMix64& gen);

/// sin^2(pi y / M) for a sampled outcome; always in [0, 1].
[[nodiscard]] double qae_estimate(double a, std::uint64_t n, SplitMix64& gen);

/// Amplitude estimation of the mean of `values`, which must lie in [0, 1].
[[nodiscard]] double qae_mean(std::span<const double> values, std::uint64_t n, SplitMix64& gen);

/// Mean of n entries drawn uniformly with replacement.
[[nodiscard]] double subsample_mean(std::span<const double> values, std::uint64_t n, SplitMix64& gen);

enum class EstimatorMode { amplitude, classical };

/// A mean estimator with a fixed query budget.
class MeanEstimator {
 public:
  explicit MeanEstimator(std::uint64_t n, EstimatorMode mode = EstimatorMode::amplitude);

  [[nodiscard]] std::uint64_t budget() const noexcept { return n_; }
  [[nodiscard]] EstimatorMode mode() const noexcept { return mode_; }

  [[nodiscard]] double operator()(std::span<const double> values, SplitMix64& gen) const;

 private:
  std::uint64_t n_;
  EstimatorMode mode_;
};

/// Amplitude estimate of a mean xbar in [-1, 1] (e.g. of an array scaled into
/// [-1, 1]). The array is shifted to 1/2 + x/4 + u with u ~ U[-1/4, 1/4] drawn
/// from `gen`, so a ranges over [0, 1] and no input sits on the outcome grid
/// systematically. The returned value is 4 (estimate - 1/2 - u).
[[nodiscard]] double qae_signed_mean(double xbar, std::uint64_t n, SplitMix64& gen);

/// Undithered variant: a = (1 + xbar) / 2, returns 2 estimate - 1.
[[nodiscard]] double qae_signed_mean_plain(double xbar, std::uint64_t n, SplitMix64& gen);

/// Lower median (element of rank floor((M-1)/2)). Throws on empty input.
[[nodiscard]] double lower_median(std::vector<double> values);

/// Median of M independent runs; run(rep) is called for rep = 0..M-1.
template <class Run>
[[nodiscard]] double median_boost(Run&& run, std::uint64_t repetitions) {
  if (repetitions == 0) throw std::invalid_argument("median_boost needs at least one repetition");
  std::vector<double> values;
  values.reserve(repetitions);
  for (std::uint64_t rep = 0; rep < repetitions; ++rep) values.push_back(run(rep));
  return lower_median(std::move(values));
}

enum class Phase { start, fine };

[[nodiscard]] std::string to_string(Phase phase);

/// Oracle-call counter partitioned by (level, phase).
class QueryLedger {
 public:
  /// Throws std::overflow_error if any total would exceed 2^64 - 1.
  void charge(int level, Phase phase, std::uint64_t amount);
  void merge(const QueryLedger& other);

  [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
  [[nodiscard]] std::uint64_t level_total(int level) const noexcept;
  [[nodiscard]] std::uint64_t phase_total(Phase phase) const noexcept;
  [[nodiscard]] const std::map<std::pair<int, Phase>, std::uint64_t>& entries() const noexcept {
    return entries_;
  }

  friend bool operator==(const QueryLedger&, const QueryLedger&) = default;

 private:
  std::map<std::pair<int, Phase>, std::uint64_t> entries_;
  std::uint64_t total_ = 0;
};

/// Query factor of a fine-level estimator run on a detail function with v
/// coarse anchors: v + 1 evaluations per entry, doubled for uncomputation.
[[nodiscard]] constexpr std::uint64_t quantum_query_factor(std::uint64_t v) noexcept { return 2 * (v + 1); }

struct IntegrateOptions {
  /// Residual bound constant: sup |g - P g| <= c * norm * 2^{-rk}. Defaults to
  /// interpolation_remainder_constant(r, d2).
  std::optional<double> remainder_constant;
  /// Composite Gauss-Legendre rule for the residual mean.
  int min_panels = 16;
  int points = 8;
  bool dither = true;
};

/// Preparation of one quantum integration of g over [0,1]^{d2} with budget n:
/// interpolate g on the largest level-k mesh holding at most n/2 points,
/// integrate the interpolant exactly and keep the residual for amplitude
/// estimation with the remaining budget.
struct IntegrationPlan {
  std::uint64_t budget = 0;
  std::optional<MeshSpec> mesh;
  std::uint64_t mesh_queries = 0;
  std::uint64_t residual_budget = 0;
  double exact_part = 0.0;
  double residual_mean = 0.0;
  double residual_bound = 0.0;
  double residual_sup = 0.0;
  double residual_variance = 0.0;
  /// The residual is zero to rounding at every sampled point (g is reproduced
  /// by the interpolant); the estimator run is skipped but still charged.
  bool residual_vanishes = false;
  std::optional<PiecewiseLagrange> interpolant;
  bool dither = true;
};

/// Throws NormBoundViolation when a sampled residual exceeds the bound.
[[nodiscard]] IntegrationPlan plan_quantum_integrate(const ScalarField& g, int r, int d2, double norm,
                                                     std::uint64_t n, const IntegrateOptions& opts = {});

[[nodiscard]] double sample_quantum_integrate(const IntegrationPlan& plan, SplitMix64& gen);

/// One run of the integration algorithm; charges n queries when a ledger is given.
[[nodiscard]] double quantum_integrate(const ScalarField& g, int r, int d2, double norm, std::uint64_t n,
                                       SplitMix64& gen, QueryLedger* ledger = nullptr, int level = 0,
                                       const IntegrateOptions& opts = {});

}  // namespace parint
