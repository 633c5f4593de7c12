// SPDX-License-Identifier: Apache-2.0
#include "parint/multilevel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "parint/constants.hpp"
#include "parint/quadrature.hpp"

namespace parint {

namespace {

// Probability-3/4 half width of the normal law is 1.1503 standard deviations.
constexpr double kNormalQuartile = 1.1503493803760079;

struct MeanAndSup {
  double mean = 0.0;
  double sup = 0.0;
  double second = 0.0;
};

MeanAndSup array_statistics(const SmoothFunction& f, const DetailContext& ctx, const NodeSet& nodes,
                            const FixedPointCodec& codec) {
  MeanAndSup out;
  const std::uint64_t count = *nodes.size();
  std::vector<double> t(static_cast<std::size_t>(nodes.d2()));
  for (std::uint64_t j = 0; j < count; ++j) {
    nodes.node(j, t);
    const double x = quantized_detail_eval(f, ctx, codec, t);
    out.mean += x;
    out.sup = std::max(out.sup, std::abs(x));
  }
  out.mean /= static_cast<double>(count);
  return out;
}

MeanAndSup continuous_statistics(const SmoothFunction& f, const DetailContext& ctx, const AxisRule& rule) {
  MeanAndSup out;
  out.mean = integrate_unit_cube(f.d2(), rule, [&](std::span<const double> t) {
    const double x = detail_eval(f, ctx, t);
    out.sup = std::max(out.sup, std::abs(x));
    return x;
  });
  out.second = integrate_unit_cube(f.d2(), rule, [&](std::span<const double> t) {
    const double x = detail_eval(f, ctx, t);
    return x * x;
  });
  return out;
}

std::string describe(int k, const Point& s) {
  std::ostringstream os;
  os << "level " << k << ", s = (";
  for (std::size_t a = 0; a < s.size(); ++a) os << (a ? ", " : "") << s[a];
  os << ")";
  return os.str();
}

void random_point(SplitMix64& gen, std::span<double> t) {
  for (double& x : t) x = uniform01(gen);
}

double standard_normal(SplitMix64& gen) {
  const double u1 = 1.0 - uniform01(gen);
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

ParintPlan ParintPlan::prepare(const SmoothFunction& f, std::uint64_t n, const ParintOptions& opts) {
  const int r = f.r();
  const int d1 = f.d1();
  const int d2 = f.d2();
  if (opts.enforce_unit_ball && f.norm_bound() > 1.0)
    throw std::invalid_argument("integrand declares a norm bound above 1");

  ParintPlan plan;
  plan.opts_ = opts;
  plan.f_.emplace(f);
  plan.schedule_ = opts.mode == EstimatorMode::amplitude ? build_schedule(n, r, d1, d2)
                                                          : build_mc_schedule(n, r, d1, d2);
  const auto& sch = plan.schedule_;
  const bool quantum = opts.mode == EstimatorMode::amplitude;
  const bool integrate_start = quantum ? r >= d1 : 2 * r > d1;
  const double c1 = opts.detail_constant.value_or(detail_constant(r, d1, d2));
  const double cint = opts.integration_constant.value_or(integration_constant(r, d1, d2));
  const auto rule = composite_gauss_legendre(opts.oracle_panels, opts.oracle_points);

  auto use_array = [&](const LevelParams& lp) {
    switch (opts.oracle) {
      case MeanOracle::materialized:
        if (!lp.summands || *lp.summands > kMaxMaterializedNodes)
          throw std::length_error("node set too large to materialize");
        return true;
      case MeanOracle::quadrature: return false;
      case MeanOracle::automatic: return lp.summands && *lp.summands <= opts.materialize_limit;
    }
    return false;
  };

  // Start level.
  {
    const LevelParams& lp = sch.level(sch.m_tilde);
    const MeshSpec mesh{sch.m_tilde, r, d1};
    LevelTask task;
    task.k = sch.m_tilde;
    task.phase = Phase::start;
    task.budget = lp.n2;
    task.repetitions = lp.repetitions;
    task.charge_per_run = lp.n2;
    const auto codec = FixedPointCodec::for_level(r, sch.m_tilde, lp.n2);
    const auto nodes = NodeSet::for_level(r, sch.m_tilde, lp.n2, d2);
    task.scale = integrate_start ? 1.0 : 1.0 + codec.resolution();
    for (std::uint64_t i = 0; i < lp.n1; ++i) {
      const auto coords = mesh_coords(mesh, i);
      NodeTask nt;
      nt.node = i;
      nt.context = DetailContext::start(sch.m_tilde, r, coords);
      if (integrate_start) {
        IntegrateOptions io;
        io.remainder_constant = cint;
        io.dither = opts.dither;
        const Point s = nt.context.s;
        nt.integration = plan_quantum_integrate(
            [&f, s](std::span<const double> t) { return f(s, t); }, r, d2, f.norm_bound(), lp.n2, io);
        nt.target = nt.integration->exact_part + nt.integration->residual_mean;
        nt.variance = nt.integration->residual_variance;
      } else if (quantum) {
        const auto st = use_array(lp) ? array_statistics(f, nt.context, nodes, codec)
                                      : MeanAndSup{quantized_detail_integral(f, nt.context, codec, rule), 0.0, 0.0};
        nt.target = st.mean;
      } else {
        const auto st = continuous_statistics(f, nt.context, rule);
        nt.target = st.mean;
        nt.variance = std::max(0.0, st.second - st.mean * st.mean);
      }
      task.nodes.push_back(std::move(nt));
    }
    plan.tasks_.push_back(std::move(task));
  }

  // Fine levels.
  const std::uint64_t query_factor =
      quantum ? quantum_query_factor(sch.v) : sch.v + 1;
  for (int k = sch.m_tilde + 1; k <= sch.l; ++k) {
    const LevelParams& lp = sch.level(k);
    const MeshSpec mesh{k, r, d1};
    LevelTask task;
    task.k = k;
    task.phase = Phase::fine;
    task.budget = lp.n2;
    task.repetitions = lp.repetitions;
    task.charge_per_run = query_factor * lp.n2;
    task.scale = c1 * std::ldexp(1.0, -r * k);
    const auto codec = FixedPointCodec::for_level(r, k, lp.n2);
    const auto nodes = NodeSet::for_level(r, k, lp.n2, d2);
    const bool materialize = quantum && use_array(lp);
    for (std::uint64_t i = 0; i < lp.n1; ++i) {
      const auto coords = mesh_coords(mesh, i);
      if (on_coarser_mesh(mesh, coords)) continue;
      NodeTask nt;
      nt.node = i;
      nt.context = DetailContext::make(k, r, coords);
      if (quantum) {
        MeanAndSup st;
        if (materialize) {
          st = array_statistics(f, nt.context, nodes, codec);
        } else {
          st.mean = quantized_detail_integral(f, nt.context, codec, rule, &st.sup);
        }
        if (st.sup > task.scale) {
          std::ostringstream os;
          os << "detail sup " << st.sup << " exceeds c_1 2^{-rk} = " << task.scale << " at "
             << describe(k, nt.context.s);
          throw NormBoundViolation(os.str());
        }
        nt.target = st.mean;
      } else {
        const auto st = continuous_statistics(f, nt.context, rule);
        nt.target = st.mean;
        nt.variance = std::max(0.0, st.second - st.mean * st.mean);
      }
      if (!(quantum == false && task.budget <= opts.classical_exact_limit)) {
        // The context is only needed again for exact classical draws.
        nt.context.anchors.clear();
        nt.context.anchors.shrink_to_fit();
        nt.context.weights.clear();
        nt.context.weights.shrink_to_fit();
      }
      task.nodes.push_back(std::move(nt));
    }
    plan.tasks_.push_back(std::move(task));
  }
  return plan;
}

double ParintPlan::run_once(const LevelTask& task, const NodeTask& node, SplitMix64& gen) const {
  const SmoothFunction& f = *f_;
  if (opts_.mode == EstimatorMode::amplitude) {
    if (node.integration) return sample_quantum_integrate(*node.integration, gen);
    const double x = node.target / task.scale;
    const double est = opts_.dither ? qae_signed_mean(x, task.budget, gen)
                                    : qae_signed_mean_plain(x, task.budget, gen);
    return task.scale * est;
  }

  // Classical sampling: exact draws for small budgets, otherwise the normal
  // law of the sample mean.
  std::vector<double> t(static_cast<std::size_t>(f.d2()));
  if (node.integration) {
    const auto& ip = *node.integration;
    const std::uint64_t b = ip.residual_budget;
    if (b == 0 || ip.residual_vanishes) return ip.exact_part;
    if (b > opts_.classical_exact_limit)
      return node.target + std::sqrt(ip.residual_variance / static_cast<double>(b)) * standard_normal(gen);
    const Point& s = node.context.s;
    double acc = 0.0;
    for (std::uint64_t i = 0; i < b; ++i) {
      random_point(gen, t);
      acc += f(s, t) - (ip.interpolant ? (*ip.interpolant)(t) : 0.0);
    }
    return ip.exact_part + acc / static_cast<double>(b);
  }
  if (task.budget > opts_.classical_exact_limit)
    return node.target + std::sqrt(node.variance / static_cast<double>(task.budget)) * standard_normal(gen);
  double acc = 0.0;
  for (std::uint64_t i = 0; i < task.budget; ++i) {
    random_point(gen, t);
    acc += detail_eval(f, node.context, t);
  }
  return acc / static_cast<double>(task.budget);
}

double ParintPlan::tolerance(const LevelTask& task, const NodeTask& node) const {
  const double widen = opts_.dither ? 4.0 : 2.0;
  if (opts_.mode == EstimatorMode::amplitude) {
    if (node.integration) {
      const auto& ip = *node.integration;
      if (ip.residual_budget == 0 || ip.residual_vanishes) return 0.0;
      return ip.residual_bound * widen * qae_error_bound(ip.residual_budget, 0.5);
    }
    return task.scale * widen * qae_error_bound(task.budget, 0.5);
  }
  if (node.integration) {
    const auto& ip = *node.integration;
    if (ip.residual_budget == 0 || ip.residual_vanishes) return 0.0;
    return kNormalQuartile * std::sqrt(ip.residual_variance / static_cast<double>(ip.residual_budget));
  }
  return kNormalQuartile * std::sqrt(node.variance / static_cast<double>(task.budget));
}

ParintResult ParintPlan::sample(std::uint64_t seed) const {
  const RandomSource source(seed);
  const auto& sch = schedule_;
  QueryLedger ledger;
  std::vector<LevelEstimates> levels;
  std::vector<std::vector<double>> values;
  for (const auto& task : tasks_) {
    LevelEstimates le;
    le.k = task.k;
    le.phase = task.phase;
    le.scale = task.scale;
    le.nodes.reserve(task.nodes.size());
    std::vector<double> vals(MeshSpec{task.k, sch.r, sch.d1}.point_count(), 0.0);
    for (const auto& node : task.nodes) {
      const double est = median_boost(
          [&](std::uint64_t rep) {
            SplitMix64 gen = source.stream(static_cast<std::uint64_t>(task.k), node.node, rep);
            return run_once(task, node, gen);
          },
          task.repetitions);
      vals[node.node] = est;
      le.nodes.push_back({node.node, node.target, est, tolerance(task, node)});
    }
    ledger.charge(task.k, task.phase, task.repetitions * task.charge_per_run * task.nodes.size());
    values.push_back(std::move(vals));
    levels.push_back(std::move(le));
  }
  return ParintResult{assemble_levels(sch.m_tilde, sch.r, sch.d1, values), std::move(ledger), sch, seed,
                      std::move(levels)};
}

ParintResult run_parint(const SmoothFunction& f, std::uint64_t n, std::uint64_t seed, const ParintOptions& opts) {
  return ParintPlan::prepare(f, n, opts).sample(seed);
}

PiecewiseLagrange assemble_levels(int m_tilde, int r, int d1, const std::vector<std::vector<double>>& values) {
  if (values.empty()) throw std::invalid_argument("no levels to assemble");
  std::vector<double> coeff = values.front();
  if (coeff.size() != MeshSpec{m_tilde, r, d1}.point_count())
    throw std::invalid_argument("start level values do not match the mesh");
  for (std::size_t i = 1; i < values.size(); ++i) {
    const int k = m_tilde + static_cast<int>(i);
    const MeshSpec coarse{k - 1, r, d1};
    const MeshSpec fine{k, r, d1};
    const PiecewiseLagrange prev(coarse, std::move(coeff));
    const auto& xi = values[i];
    if (xi.size() != fine.point_count()) throw std::invalid_argument("level values do not match the mesh");
    coeff.assign(xi.size(), 0.0);
    std::vector<std::uint64_t> half(static_cast<std::size_t>(d1));
    for (std::uint64_t j = 0; j < xi.size(); ++j) {
      const auto coords = mesh_coords(fine, j);
      double base;
      if (on_coarser_mesh(fine, coords)) {
        for (std::size_t a = 0; a < coords.size(); ++a) half[a] = coords[a] / 2;
        base = prev.coefficients()[mesh_flat(coarse, half)];
      } else {
        base = prev(mesh_point(fine, j));
      }
      coeff[j] = base + xi[j];
    }
  }
  const int l = m_tilde + static_cast<int>(values.size()) - 1;
  return PiecewiseLagrange(MeshSpec{l, r, d1}, std::move(coeff));
}

ReferenceTable::ReferenceTable(const SmoothFunction& f, std::uint64_t per_axis, ReferenceResolution res)
    : d1_(f.d1()), per_axis_(per_axis) {
  const auto rule = composite_gauss_legendre(res.panels, res.points);
  if (std::pow(static_cast<double>(rule.nodes.size()), f.d2()) > static_cast<double>(kMaxReferenceNodes))
    throw std::length_error("reference quadrature resolution too large");
  for_each_grid_point(d1_, per_axis_, [&](std::span<const double> s) {
    values_.push_back(integrate_unit_cube(f.d2(), rule, [&](std::span<const double> t) { return f(s, t); }));
  });
}

double ReferenceTable::sup_error(const PiecewiseLagrange& approx) const {
  if (approx.spec().d != d1_) throw std::invalid_argument("approximation dimension mismatch");
  double sup = 0.0;
  std::size_t i = 0;
  for_each_grid_point(d1_, per_axis_, [&](std::span<const double> s) {
    sup = std::max(sup, std::abs(values_[i++] - approx(s)));
  });
  return sup;
}

std::uint64_t probe_resolution(int l, int r, int factor) {
  if (factor < 1) throw std::invalid_argument("probe factor must be positive");
  return static_cast<std::uint64_t>(factor) * static_cast<std::uint64_t>(r) * (std::uint64_t{1} << l) + 1;
}

double measure_sup_error(const ParintResult& result, const SmoothFunction& f, int factor, ReferenceResolution res) {
  if (factor < 4) throw std::invalid_argument("probe grid must be at least 4x finer than the output mesh");
  const auto& spec = result.approximation.spec();
  return ReferenceTable(f, probe_resolution(spec.k, spec.r, factor), res).sup_error(result.approximation);
}

}  // namespace parint
