// SPDX-License-Identifier: Apache-2.0
#include "parint/quantum.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "parint/quadrature.hpp"

namespace parint {

namespace {

using std::numbers::pi;

void check_amplitude(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("amplitude must lie in [0, 1]");
}

double phase_of(double a) { return std::asin(std::sqrt(a)) / pi; }

// Fejer-type kernel F((y - c)/M) for integer y and real centre c.
double kernel(double y, double c, double m) {
  const double den = std::sin(pi * (y - c) / m);
  if (std::abs(den) < 1e-12) return 1.0;
  const double num = std::sin(pi * c);
  return (num * num) / (m * m * den * den);
}

std::uint64_t wrap(long long y, std::uint64_t m) {
  const auto mm = static_cast<long long>(m);
  long long w = y % mm;
  if (w < 0) w += mm;
  return static_cast<std::uint64_t>(w);
}

}  // namespace

std::uint64_t qae_outcome_count(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("query budget must be positive");
  if (n > (std::uint64_t{1} << 52)) throw std::invalid_argument("query budget too large to simulate");
  return n % 2 == 0 ? n : n + 1;
}

double qae_error_bound(std::uint64_t n, double a) {
  const double nn = static_cast<double>(n);
  return 2.0 * pi * std::sqrt(a * (1.0 - a)) / nn + pi * pi / (nn * nn);
}

std::vector<double> qae_outcome_distribution(double a, std::uint64_t n) {
  check_amplitude(a);
  const std::uint64_t count = qae_outcome_count(n);
  if (count > (std::uint64_t{1} << 26)) throw std::length_error("outcome distribution too large");
  const double m = static_cast<double>(count);
  const double c = phase_of(a) * m;
  std::vector<double> p(count);
  for (std::uint64_t y = 0; y < count; ++y) {
    const double yy = static_cast<double>(y);
    p[y] = 0.5 * kernel(yy, c, m) + 0.5 * kernel(yy, -c, m);
  }
  return p;
}

std::uint64_t qae_sample(double a, std::uint64_t n, SplitMix64& gen) {
  check_amplitude(a);
  const std::uint64_t count = qae_outcome_count(n);
  const double m = static_cast<double>(count);
  const double sign = (gen() >> 63) != 0 ? -1.0 : 1.0;
  const double c = sign * phase_of(a) * m;
  const double nearest = std::round(c);
  if (std::abs(c - nearest) < 1e-13) return wrap(static_cast<long long>(nearest), count);

  // Walk outward from the centre in order of distance, inverting the CDF.
  const double u = uniform01(gen);
  auto lo = static_cast<long long>(std::floor(c));
  auto hi = lo + 1;
  double acc = 0.0;
  long long last = lo;
  for (std::uint64_t step = 0; step < count; ++step) {
    const bool take_lo = (c - static_cast<double>(lo)) <= (static_cast<double>(hi) - c);
    last = take_lo ? lo : hi;
    acc += kernel(static_cast<double>(last), c, m);
    if (u < acc) break;
    if (take_lo) --lo;
    else ++hi;
  }
  return wrap(last, count);
}

double qae_estimate(double a, std::uint64_t n, SplitMix64& gen) {
  const std::uint64_t y = qae_sample(a, n, gen);
  const double s = std::sin(pi * static_cast<double>(y) / static_cast<double>(qae_outcome_count(n)));
  return s * s;
}

double qae_mean(std::span<const double> values, std::uint64_t n, SplitMix64& gen) {
  if (values.empty()) throw std::invalid_argument("qae_mean needs at least one value");
  double acc = 0.0;
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("qae_mean values must lie in [0, 1]");
    acc += v;
  }
  const double a = std::clamp(acc / static_cast<double>(values.size()), 0.0, 1.0);
  return qae_estimate(a, n, gen);
}

double subsample_mean(std::span<const double> values, std::uint64_t n, SplitMix64& gen) {
  if (values.empty()) throw std::invalid_argument("subsample_mean needs at least one value");
  if (n == 0) throw std::invalid_argument("query budget must be positive");
  double acc = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) acc += values[uniform_below(gen, values.size())];
  return acc / static_cast<double>(n);
}

MeanEstimator::MeanEstimator(std::uint64_t n, EstimatorMode mode) : n_(n), mode_(mode) {
  if (n == 0) throw std::invalid_argument("query budget must be positive");
}

double MeanEstimator::operator()(std::span<const double> values, SplitMix64& gen) const {
  if (mode_ == EstimatorMode::classical) {
    for (double v : values)
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("estimator values must lie in [0, 1]");
    return subsample_mean(values, n_, gen);
  }
  return qae_mean(values, n_, gen);
}

namespace {

double checked_signed(double xbar) {
  constexpr double slack = 1e-12;
  if (!(std::abs(xbar) <= 1.0 + slack)) throw NormBoundViolation("scaled mean outside [-1, 1]");
  return std::clamp(xbar, -1.0, 1.0);
}

}  // namespace

double qae_signed_mean(double xbar, std::uint64_t n, SplitMix64& gen) {
  const double x = checked_signed(xbar);
  const double u = 0.5 * (uniform01(gen) - 0.5);
  const double a = std::clamp(0.5 + 0.25 * x + u, 0.0, 1.0);
  return 4.0 * (qae_estimate(a, n, gen) - 0.5 - u);
}

double qae_signed_mean_plain(double xbar, std::uint64_t n, SplitMix64& gen) {
  const double x = checked_signed(xbar);
  return 2.0 * qae_estimate(0.5 * (1.0 + x), n, gen) - 1.0;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

std::string to_string(Phase phase) { return phase == Phase::start ? "start" : "fine"; }

void QueryLedger::charge(int level, Phase phase, std::uint64_t amount) {
  constexpr auto max = std::numeric_limits<std::uint64_t>::max();
  if (amount > max - total_) throw std::overflow_error("query ledger overflow");
  entries_[{level, phase}] += amount;
  total_ += amount;
}

void QueryLedger::merge(const QueryLedger& other) {
  for (const auto& [key, amount] : other.entries_) charge(key.first, key.second, amount);
}

std::uint64_t QueryLedger::level_total(int level) const noexcept {
  std::uint64_t acc = 0;
  for (const auto& [key, amount] : entries_)
    if (key.first == level) acc += amount;
  return acc;
}

std::uint64_t QueryLedger::phase_total(Phase phase) const noexcept {
  std::uint64_t acc = 0;
  for (const auto& [key, amount] : entries_)
    if (key.second == phase) acc += amount;
  return acc;
}

IntegrationPlan plan_quantum_integrate(const ScalarField& g, int r, int d2, double norm, std::uint64_t n,
                                       const IntegrateOptions& opts) {
  if (n == 0) throw std::invalid_argument("query budget must be positive");
  if (!(norm >= 0.0)) throw std::invalid_argument("norm bound must be non-negative");
  validate(MeshSpec{0, r, d2});

  IntegrationPlan plan;
  plan.budget = n;
  plan.dither = opts.dither;
  for (int k = 0;; ++k) {
    const MeshSpec spec{k, r, d2};
    const double count = std::pow(static_cast<double>(spec.per_axis()), d2);
    if (count > static_cast<double>(n / 2)) break;
    plan.mesh = spec;
  }

  auto& interpolant = plan.interpolant;
  int panels = opts.min_panels;
  if (plan.mesh) {
    plan.mesh_queries = plan.mesh->point_count();
    interpolant.emplace(*plan.mesh, sample_on_mesh(*plan.mesh, g));
    plan.exact_part = interpolant->integral();
    const double c = opts.remainder_constant.value_or(interpolation_remainder_constant(r, d2));
    plan.residual_bound = c * norm * std::ldexp(1.0, -r * plan.mesh->k);
    panels = std::max<int>(panels, static_cast<int>(plan.mesh->cubes_per_axis()));
  } else {
    plan.residual_bound = norm;
  }
  plan.residual_budget = n - plan.mesh_queries;

  const auto rule = composite_gauss_legendre(panels, opts.points);
  double sup = 0.0;
  double g_sup = 0.0;
  double second = 0.0;
  plan.residual_mean = integrate_unit_cube(d2, rule, [&](std::span<const double> t) {
    const double gt = g(t);
    const double res = gt - (interpolant ? (*interpolant)(t) : 0.0);
    sup = std::max(sup, std::abs(res));
    g_sup = std::max(g_sup, std::abs(gt));
    return res;
  });
  if (plan.residual_budget > 0) {
    second = integrate_unit_cube(d2, rule, [&](std::span<const double> t) {
      const double res = g(t) - (interpolant ? (*interpolant)(t) : 0.0);
      return res * res;
    });
  }
  plan.residual_sup = sup;
  plan.residual_vanishes = sup <= 64.0 * std::numeric_limits<double>::epsilon() * g_sup;
  plan.residual_variance = std::max(0.0, second - plan.residual_mean * plan.residual_mean);
  if (sup > plan.residual_bound * (1.0 + 1e-12))
    throw NormBoundViolation("integrand residual " + std::to_string(sup) + " exceeds bound " +
                             std::to_string(plan.residual_bound));
  return plan;
}

double sample_quantum_integrate(const IntegrationPlan& plan, SplitMix64& gen) {
  if (plan.residual_budget == 0 || plan.residual_bound == 0.0 || plan.residual_vanishes) return plan.exact_part;
  const double xbar = plan.residual_mean / plan.residual_bound;
  const double est = plan.dither ? qae_signed_mean(xbar, plan.residual_budget, gen)
                                 : qae_signed_mean_plain(xbar, plan.residual_budget, gen);
  return plan.exact_part + plan.residual_bound * est;
}

double quantum_integrate(const ScalarField& g, int r, int d2, double norm, std::uint64_t n, SplitMix64& gen,
                         QueryLedger* ledger, int level, const IntegrateOptions& opts) {
  const auto plan = plan_quantum_integrate(g, r, d2, norm, n, opts);
  const double v = sample_quantum_integrate(plan, gen);
  if (ledger != nullptr) ledger->charge(level, Phase::start, n);
  return v;
}

}  // namespace parint
