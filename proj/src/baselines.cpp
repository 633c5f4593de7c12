// SPDX-License-Identifier: Apache-2.0
#include "parint/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace parint {

DeterministicResult deterministic_baseline(const SmoothFunction& f, std::uint64_t n) {
  const int r = f.r();
  const int d1 = f.d1();
  const int d2 = f.d2();
  const int d = d1 + d2;
  int level = -1;
  for (int k = 0; k < 40; ++k) {
    const double count = std::pow(static_cast<double>(MeshSpec{k, r, 1}.per_axis()), d);
    if (count > static_cast<double>(n)) break;
    level = k;
  }
  if (level < 0) throw std::invalid_argument("budget too small for a single grid cell");

  const MeshSpec s_mesh{level, r, d1};
  const MeshSpec t_mesh{level, r, d2};
  const auto w = composite_axis_weights(level, r);
  const std::uint64_t nt = t_mesh.point_count();
  std::vector<Point> t_points;
  std::vector<double> t_weights;
  t_points.reserve(nt);
  t_weights.reserve(nt);
  for (std::uint64_t j = 0; j < nt; ++j) {
    const auto coords = mesh_coords(t_mesh, j);
    double wj = 1.0;
    for (auto c : coords) wj *= w[c];
    t_points.push_back(mesh_point(t_mesh, j));
    t_weights.push_back(wj);
  }

  const std::uint64_t ns = s_mesh.point_count();
  std::vector<double> coeff(ns);
  for (std::uint64_t i = 0; i < ns; ++i) {
    const Point s = mesh_point(s_mesh, i);
    double acc = 0.0;
    for (std::uint64_t j = 0; j < nt; ++j) acc += t_weights[j] * f(s, t_points[j]);
    coeff[i] = acc;
  }
  return {PiecewiseLagrange(s_mesh, std::move(coeff)), ns * nt};
}

ParintResult mc_baseline(const SmoothFunction& f, std::uint64_t n, std::uint64_t seed, ParintOptions opts) {
  opts.mode = EstimatorMode::classical;
  return run_parint(f, n, seed, opts);
}

}  // namespace parint
