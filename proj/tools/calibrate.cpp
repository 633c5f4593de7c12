// SPDX-License-Identifier: Apache-2.0
//
// Measures the scaling constants on the smooth test corpus and prints the
// table frozen in src/constants.cpp.
//
// detail:      2 * max sup_t |quantized detail of f at (k, s)| * 2^{rk}
// integration: 2 * max sup_t |f(s,t) - (P f(s,.))(t)| * 2^{rk'} / norm
//
// over the fine levels and start levels that the quantum and classical
// schedules use for budgets 2^4 .. 2^max_log2.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parint/constants.hpp"
#include "parint/detail.hpp"
#include "parint/function.hpp"
#include "parint/grid.hpp"
#include "parint/quadrature.hpp"
#include "parint/quantum.hpp"
#include "parint/schedule.hpp"

namespace {

using namespace parint;

struct Config {
  int r;
  int d1;
  int d2;
  int max_log2;
};

// sup over an equispaced grid and the oracle rule nodes.
double detail_sup(const SmoothFunction& f, const DetailContext& ctx, const FixedPointCodec& codec,
                  const AxisRule& rule, int grid) {
  double sup = 0.0;
  (void)quantized_detail_integral(f, ctx, codec, rule, &sup);
  for_each_grid_point(f.d2(), static_cast<std::uint64_t>(grid), [&](std::span<const double> t) {
    sup = std::max(sup, std::abs(quantized_detail_eval(f, ctx, codec, t)));
  });
  return sup;
}

struct Ratios {
  double detail = 0.0;
  double integration = 0.0;
};

void scan_schedule(const SmoothFunction& f, const LevelSchedule& sch, bool integrate_start, Ratios& out,
                   std::vector<std::pair<int, std::uint64_t>>& seen_fine,
                   std::vector<std::uint64_t>& seen_start) {
  const int r = sch.r;
  const int d1 = sch.d1;
  const int d2 = sch.d2;
  const auto rule = composite_gauss_legendre(4, 8);
  const int grid = d2 == 1 ? 65 : 9;

  if (integrate_start) {
    const auto& lp = sch.level(sch.m_tilde);
    if (std::find(seen_start.begin(), seen_start.end(), lp.n2) == seen_start.end()) {
      seen_start.push_back(lp.n2);
      const MeshSpec mesh{sch.m_tilde, r, d1};
      IntegrateOptions io;
      io.remainder_constant = 1e300;
      for (std::uint64_t i = 0; i < lp.n1; ++i) {
        const Point s = mesh_point(mesh, i);
        const auto plan = plan_quantum_integrate([&f, s](std::span<const double> t) { return f(s, t); }, r, d2,
                                                 f.norm_bound(), lp.n2, io);
        if (!plan.mesh) continue;
        out.integration =
            std::max(out.integration, plan.residual_sup * std::ldexp(1.0, r * plan.mesh->k) / f.norm_bound());
      }
    }
  }

  for (int k = sch.m_tilde + 1; k <= sch.l; ++k) {
    const auto& lp = sch.level(k);
    const std::pair<int, std::uint64_t> key{k, lp.n2};
    if (std::find(seen_fine.begin(), seen_fine.end(), key) != seen_fine.end()) continue;
    seen_fine.push_back(key);
    const MeshSpec mesh{k, r, d1};
    const auto codec = FixedPointCodec::for_level(r, k, lp.n2);
    const auto nodes = NodeSet::for_level(r, k, lp.n2, d2);
    const bool materialize = lp.summands && *lp.summands <= 4096;
    for (std::uint64_t i = 0; i < lp.n1; ++i) {
      const auto coords = mesh_coords(mesh, i);
      if (on_coarser_mesh(mesh, coords)) continue;
      const auto ctx = DetailContext::make(k, r, coords);
      double sup = detail_sup(f, ctx, codec, rule, grid);
      if (materialize)
        for (double x : discretize(f, ctx, nodes, codec)) sup = std::max(sup, std::abs(x));
      out.detail = std::max(out.detail, sup * std::ldexp(1.0, r * k));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibrate the multilevel scaling constants on the smooth corpus"};
  int only_r = 0;
  app.add_option("--r", only_r, "restrict to this r");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Config> configs{{1, 1, 1, 12}, {2, 1, 1, 12}, {3, 1, 1, 12}, {1, 2, 1, 12},
                                    {2, 2, 1, 12}, {1, 1, 2, 10}, {2, 1, 2, 10}};
  std::cout << std::setprecision(6);
  for (const auto& c : configs) {
    if (only_r != 0 && c.r != only_r) continue;
    Ratios ratios;
    for (const auto& f : smooth_corpus(c.r, c.d1, c.d2)) {
      std::vector<std::pair<int, std::uint64_t>> fine_q, fine_mc;
      std::vector<std::uint64_t> start_q, start_mc;
      for (int e = 4; e <= c.max_log2; ++e) {
        const std::uint64_t n = std::uint64_t{1} << e;
        scan_schedule(f, build_schedule(n, c.r, c.d1, c.d2), c.r >= c.d1, ratios, fine_q, start_q);
        scan_schedule(f, build_mc_schedule(n, c.r, c.d1, c.d2), 2 * c.r > c.d1, ratios, fine_mc, start_mc);
      }
    }
    std::cout << "    {" << c.r << ", " << c.d1 << ", " << c.d2 << ", " << 2.0 * ratios.detail << ", "
              << 2.0 * ratios.integration << "},  // a priori detail " << a_priori_detail_constant(c.r, c.d1)
              << '\n'
              << std::flush;
  }
  return 0;
}
