// SPDX-License-Identifier: Apache-2.0
//
// The multilevel parametric integration algorithm.
//
// Start level m~: for every s in the level-m~ mesh estimate int f(s,t) dt,
// either by quantum_integrate on f(s,.) (r >= d1) or by amplitude estimation
// on the rectangle-rule discretization of f(s,.) (r < d1). Fine levels
// k = m~+1..l: for every s in the level-k mesh but not the level-(k-1) mesh
// estimate the mean of the discretized detail function, scaled by
// c_1^{-1} 2^{rk} into [-1, 1]. Every estimate is the median of M_k runs.
// The output is P_m~ xi_m~ + sum_k (P_k - P_{k-1}) xi_k, assembled as a
// single level-l interpolant.
//
// The simulator needs the exact mean of each array the estimator sees. For
// small node counts it is computed by summing the array; otherwise it is
// replaced by a composite Gauss-Legendre integral of the quantized detail
// function, which differs from the array mean by the rectangle-rule error
// only.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "parint/detail.hpp"
#include "parint/function.hpp"
#include "parint/grid.hpp"
#include "parint/quantum.hpp"
#include "parint/schedule.hpp"

namespace parint {

enum class MeanOracle {
  automatic,     // materialize when N_k <= materialize_limit, else quadrature
  quadrature,
  materialized,  // always sum the array; throws when N_k is too large
};

struct ParintOptions {
  EstimatorMode mode = EstimatorMode::amplitude;
  MeanOracle oracle = MeanOracle::automatic;
  std::uint64_t materialize_limit = 4096;
  /// Composite Gauss-Legendre rule per axis of D2 for the quadrature oracle.
  int oracle_panels = 4;
  int oracle_points = 8;
  /// Overrides of the calibrated scaling constants.
  std::optional<double> detail_constant;
  std::optional<double> integration_constant;
  bool dither = true;
  /// Reject integrands whose declared norm bound exceeds 1.
  bool enforce_unit_ball = true;
  /// Classical runs with budget above this use the normal law of the sample
  /// mean (exact mean and variance) instead of drawing every sample.
  std::uint64_t classical_exact_limit = 16;
};

/// One estimated node value with its simulation target.
struct NodeEstimate {
  std::uint64_t node = 0;  // flat index on the level mesh
  double target = 0.0;     // exact mean the estimator aims at
  double estimate = 0.0;   // median of the runs
  double tolerance = 0.0;  // single-run error bound at probability 3/4 (scaled)
};

struct LevelEstimates {
  int k = 0;
  Phase phase = Phase::fine;
  double scale = 0.0;  // factor the unit-range estimator output is multiplied by
  std::vector<NodeEstimate> nodes;
};

struct ParintResult {
  PiecewiseLagrange approximation;
  QueryLedger ledger;
  LevelSchedule schedule;
  std::uint64_t seed = 0;
  std::vector<LevelEstimates> levels;
};

/// Deterministic part of a run: schedule, per-node targets and scales. Runs
/// with different seeds share one plan.
class ParintPlan {
 public:
  [[nodiscard]] static ParintPlan prepare(const SmoothFunction& f, std::uint64_t n,
                                          const ParintOptions& opts = {});

  [[nodiscard]] ParintResult sample(std::uint64_t seed) const;

  [[nodiscard]] const LevelSchedule& schedule() const noexcept { return schedule_; }
  [[nodiscard]] const ParintOptions& options() const noexcept { return opts_; }

 private:
  struct NodeTask {
    std::uint64_t node = 0;
    double target = 0.0;         // mean in function units
    double variance = 0.0;       // classical mode only
    DetailContext context;
    std::optional<IntegrationPlan> integration;
  };
  struct LevelTask {
    int k = 0;
    Phase phase = Phase::fine;
    double scale = 1.0;
    std::uint64_t budget = 0;
    std::uint64_t repetitions = 1;
    std::uint64_t charge_per_run = 0;
    std::vector<NodeTask> nodes;
  };

  ParintPlan() = default;

  [[nodiscard]] double run_once(const LevelTask& task, const NodeTask& node, SplitMix64& gen) const;
  [[nodiscard]] double tolerance(const LevelTask& task, const NodeTask& node) const;

  std::optional<SmoothFunction> f_;
  LevelSchedule schedule_;
  ParintOptions opts_;
  std::vector<LevelTask> tasks_;
};

/// prepare(f, n, opts).sample(seed).
[[nodiscard]] ParintResult run_parint(const SmoothFunction& f, std::uint64_t n, std::uint64_t seed,
                                      const ParintOptions& opts = {});

/// Combine per-level node values into the level-l nodal values of
/// P_m~ xi_m~ + sum_k (P_k - P_{k-1}) xi_k. `values[i]` holds xi at level
/// m_tilde + i on the full level mesh (zero on coarser nodes for fine levels).
[[nodiscard]] PiecewiseLagrange assemble_levels(int m_tilde, int r, int d1,
                                                const std::vector<std::vector<double>>& values);

/// Values of s -> int f(s,t) dt on an equispaced probe grid of D1.
class ReferenceTable {
 public:
  ReferenceTable(const SmoothFunction& f, std::uint64_t per_axis, ReferenceResolution res = {});

  [[nodiscard]] std::uint64_t per_axis() const noexcept { return per_axis_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

  /// max over the grid of |reference - approx(s)|.
  [[nodiscard]] double sup_error(const PiecewiseLagrange& approx) const;

 private:
  int d1_;
  std::uint64_t per_axis_;
  std::vector<double> values_;
};

/// Probe points per axis for a level-l interpolant: factor * r * 2^l + 1.
[[nodiscard]] std::uint64_t probe_resolution(int l, int r, int factor);

/// Sup-error of the run's approximation over the probe grid with `factor`
/// points per level-l mesh interval (factor >= 4).
[[nodiscard]] double measure_sup_error(const ParintResult& result, const SmoothFunction& f, int factor = 4,
                                       ReferenceResolution res = {});

}  // namespace parint
