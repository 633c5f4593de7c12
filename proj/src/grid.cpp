// SPDX-License-Identifier: Apache-2.0
#include "parint/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>

namespace parint {

namespace {

constexpr double kNodeSnap = 1e-12;

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base)
      throw std::overflow_error("mesh size overflows 64-bit index");
    out *= base;
  }
  return out;
}

// Lagrange basis on the integer nodes 0..r evaluated at x in [0, r].
void lagrange_nodes(int r, double x, double* out) {
  for (int i = 0; i <= r; ++i) {
    double num = 1.0;
    double den = 1.0;
    for (int j = 0; j <= r; ++j) {
      if (j == i) continue;
      num *= x - j;
      den *= i - j;
    }
    out[i] = num / den;
  }
}

// Cube coordinate along one axis and the local node coordinate r*u in [0, r].
std::pair<std::uint64_t, double> locate_axis(double x, int k, int r) {
  const double scaled = std::ldexp(x, k);
  const auto cubes = std::uint64_t{1} << k;
  std::uint64_t c = 0;
  if (scaled > 0.0) {
    c = static_cast<std::uint64_t>(std::ceil(scaled)) - 1;
    c = std::min(c, cubes - 1);
  }
  double ru = r * (scaled - static_cast<double>(c));
  const double nearest = std::round(ru);
  if (std::abs(ru - nearest) <= kNodeSnap) ru = nearest;
  return {c, ru};
}

void check_unit_cube(std::span<const double> s, std::size_t d) {
  if (s.size() != d) throw std::invalid_argument("point dimension mismatch");
  for (double x : s) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("point outside the unit cube");
  }
}

}  // namespace

std::uint64_t MeshSpec::per_axis() const {
  return static_cast<std::uint64_t>(r) * (std::uint64_t{1} << k) + 1;
}

std::uint64_t MeshSpec::point_count() const { return checked_pow(per_axis(), d); }

std::uint64_t MeshSpec::cubes_per_axis() const { return std::uint64_t{1} << k; }

void validate(const MeshSpec& spec) {
  if (spec.k < 0 || spec.k > 40) throw std::invalid_argument("mesh level out of range");
  if (spec.r < 1 || spec.r > kMaxDegree) throw std::invalid_argument("degree out of range");
  if (spec.d < 1 || spec.d > kMaxDimension) throw std::invalid_argument("dimension out of range");
  try {
    (void)spec.point_count();
  } catch (const std::overflow_error& e) {
    throw std::invalid_argument(e.what());
  }
}

std::vector<std::uint64_t> mesh_coords(const MeshSpec& spec, std::uint64_t flat) {
  const std::uint64_t p = spec.per_axis();
  if (flat >= spec.point_count()) throw std::out_of_range("mesh index out of range");
  std::vector<std::uint64_t> coords(static_cast<std::size_t>(spec.d));
  for (int a = spec.d - 1; a >= 0; --a) {
    coords[static_cast<std::size_t>(a)] = flat % p;
    flat /= p;
  }
  return coords;
}

std::uint64_t mesh_flat(const MeshSpec& spec, std::span<const std::uint64_t> coords) {
  const std::uint64_t p = spec.per_axis();
  if (coords.size() != static_cast<std::size_t>(spec.d))
    throw std::invalid_argument("mesh coordinate dimension mismatch");
  std::uint64_t flat = 0;
  for (auto c : coords) {
    if (c >= p) throw std::out_of_range("mesh coordinate out of range");
    flat = flat * p + c;
  }
  return flat;
}

Point mesh_point(const MeshSpec& spec, std::uint64_t flat) {
  const auto coords = mesh_coords(spec, flat);
  Point pt(coords.size());
  for (std::size_t a = 0; a < coords.size(); ++a)
    pt[a] = std::ldexp(static_cast<double>(coords[a]) / spec.r, -spec.k);
  return pt;
}

std::vector<Point> mesh_points(const MeshSpec& spec) {
  validate(spec);
  const std::uint64_t count = spec.point_count();
  std::vector<Point> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(mesh_point(spec, i));
  return out;
}

bool on_coarser_mesh(const MeshSpec& spec, std::span<const std::uint64_t> coords) {
  if (spec.k == 0) return false;
  return std::all_of(coords.begin(), coords.end(), [](std::uint64_t c) { return c % 2 == 0; });
}

CubeIndex CubeIndex::from_flat(int k, int d, std::uint64_t j) {
  if (k < 0 || d < 1) throw std::invalid_argument("invalid cube level or dimension");
  const std::uint64_t per = std::uint64_t{1} << k;
  const std::uint64_t total = checked_pow(per, d);
  if (j >= total) throw std::out_of_range("cube index out of range");
  std::vector<std::uint64_t> coords(static_cast<std::size_t>(d));
  std::uint64_t rest = j;
  for (int a = d - 1; a >= 0; --a) {
    coords[static_cast<std::size_t>(a)] = rest % per;
    rest /= per;
  }
  return from_coords(k, coords);
}

CubeIndex CubeIndex::from_coords(int k, std::span<const std::uint64_t> coords) {
  const std::uint64_t per = std::uint64_t{1} << k;
  CubeIndex cube;
  cube.k = k;
  cube.coords.assign(coords.begin(), coords.end());
  cube.anchor.resize(coords.size());
  for (std::size_t a = 0; a < coords.size(); ++a) {
    if (coords[a] >= per) throw std::out_of_range("cube coordinate out of range");
    cube.j = cube.j * per + coords[a];
    cube.anchor[a] = std::ldexp(static_cast<double>(coords[a]), -k);
  }
  return cube;
}

bool CubeIndex::contains(std::span<const double> s) const {
  if (s.size() != anchor.size()) return false;
  const double side = std::ldexp(1.0, -k);
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (s[a] < anchor[a] || s[a] > anchor[a] + side) return false;
  }
  return true;
}

CubeIndex containing_cube(int k, std::span<const double> s) {
  check_unit_cube(s, s.size());
  std::vector<std::uint64_t> coords(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) coords[a] = locate_axis(s[a], k, 1).first;
  return CubeIndex::from_coords(k, coords);
}

double lagrange_1d(int r, int i, double u) {
  if (r < 1 || r > kMaxDegree || i < 0 || i > r) throw std::out_of_range("Lagrange index out of range");
  std::array<double, kMaxDegree + 1> vals{};
  lagrange_nodes(r, r * u, vals.data());
  return vals[static_cast<std::size_t>(i)];
}

double lagrange_basis_eval(std::uint64_t i, std::span<const double> s, int r, int d) {
  const MeshSpec spec{0, r, d};
  validate(spec);
  if (i >= spec.point_count()) throw std::out_of_range("basis index out of range");
  check_unit_cube(s, static_cast<std::size_t>(d));
  const auto idx = mesh_coords(spec, i);
  double v = 1.0;
  for (int a = 0; a < d; ++a) {
    const auto [c, ru] = locate_axis(s[static_cast<std::size_t>(a)], 0, r);
    std::array<double, kMaxDegree + 1> vals{};
    lagrange_nodes(r, ru, vals.data());
    v *= vals[idx[static_cast<std::size_t>(a)]];
  }
  return v;
}

ScalarField restrict_scale(ScalarField g, const CubeIndex& cube) {
  return [g = std::move(g), cube](std::span<const double> s) -> double {
    if (!cube.contains(s)) return 0.0;
    std::vector<double> y(s.size());
    for (std::size_t a = 0; a < s.size(); ++a)
      y[a] = std::clamp(std::ldexp(s[a] - cube.anchor[a], cube.k), 0.0, 1.0);
    return g(y);
  };
}

PiecewiseLagrange::PiecewiseLagrange(MeshSpec spec, std::vector<double> coefficients)
    : spec_(spec), coefficients_(std::move(coefficients)) {
  validate(spec_);
  if (coefficients_.size() != spec_.point_count())
    throw std::invalid_argument("coefficient count does not match the mesh");
  strides_.assign(static_cast<std::size_t>(spec_.d), 1);
  for (int a = spec_.d - 2; a >= 0; --a)
    strides_[static_cast<std::size_t>(a)] =
        strides_[static_cast<std::size_t>(a) + 1] * spec_.per_axis();
}

double PiecewiseLagrange::operator()(std::span<const double> s) const {
  const auto d = static_cast<std::size_t>(spec_.d);
  const int r = spec_.r;
  check_unit_cube(s, d);

  std::array<std::array<double, kMaxDegree + 1>, kMaxDimension> basis{};
  std::array<std::uint64_t, kMaxDimension> base{};
  for (std::size_t a = 0; a < d; ++a) {
    const auto [c, ru] = locate_axis(s[a], spec_.k, r);
    lagrange_nodes(r, ru, basis[a].data());
    base[a] = c * static_cast<std::uint64_t>(r) * strides_[a];
  }

  if (d == 1) {
    double acc = 0.0;
    for (int i = 0; i <= r; ++i) acc += basis[0][i] * coefficients_[base[0] + i];
    return acc;
  }

  // Odometer over the (r+1)^d local nodes.
  std::array<int, kMaxDimension> idx{};
  double acc = 0.0;
  while (true) {
    double w = 1.0;
    std::uint64_t flat = 0;
    for (std::size_t a = 0; a < d; ++a) {
      w *= basis[a][static_cast<std::size_t>(idx[a])];
      flat += base[a] + static_cast<std::uint64_t>(idx[a]) * strides_[a];
    }
    acc += w * coefficients_[flat];
    std::size_t a = d;
    while (a > 0) {
      --a;
      if (++idx[a] <= r) break;
      idx[a] = 0;
      if (a == 0) return acc;
    }
  }
}

double PiecewiseLagrange::integral() const {
  const auto w = composite_axis_weights(spec_.k, spec_.r);
  const std::uint64_t p = spec_.per_axis();
  double acc = 0.0;
  for (std::uint64_t flat = 0; flat < coefficients_.size(); ++flat) {
    double weight = 1.0;
    std::uint64_t rest = flat;
    for (int a = 0; a < spec_.d; ++a) {
      weight *= w[rest % p];
      rest /= p;
    }
    acc += weight * coefficients_[flat];
  }
  return acc;
}

std::vector<double> sample_on_mesh(const MeshSpec& spec, const ScalarField& g) {
  validate(spec);
  const std::uint64_t count = spec.point_count();
  std::vector<double> out(count);
  for (std::uint64_t i = 0; i < count; ++i) out[i] = g(mesh_point(spec, i));
  return out;
}

double interpolate(const MeshSpec& spec, std::span<const double> samples, std::span<const double> s) {
  return PiecewiseLagrange(spec, std::vector<double>(samples.begin(), samples.end()))(s);
}

std::uint64_t probe_points_per_axis(int k) { return 64 * (std::uint64_t{1} << k) + 1; }

void for_each_grid_point(int d, std::uint64_t per_axis,
                         const std::function<void(std::span<const double>)>& visit) {
  if (d < 1 || per_axis < 2) throw std::invalid_argument("grid needs d >= 1 and >= 2 points per axis");
  (void)checked_pow(per_axis, d);
  const double h = 1.0 / static_cast<double>(per_axis - 1);
  std::vector<std::uint64_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> pt(static_cast<std::size_t>(d), 0.0);
  while (true) {
    visit(pt);
    std::size_t a = idx.size();
    while (true) {
      if (a == 0) return;
      --a;
      if (++idx[a] < per_axis) {
        pt[a] = idx[a] == per_axis - 1 ? 1.0 : static_cast<double>(idx[a]) * h;
        break;
      }
      idx[a] = 0;
      pt[a] = 0.0;
    }
  }
}

double interpolant_sup_norm_ratio(const MeshSpec& spec, std::span<const double> samples) {
  const PiecewiseLagrange p(spec, std::vector<double>(samples.begin(), samples.end()));
  double sup = 0.0;
  for_each_grid_point(spec.d, probe_points_per_axis(spec.k),
                      [&](std::span<const double> s) { sup = std::max(sup, std::abs(p(s))); });
  return sup;
}

std::vector<double> newton_cotes_weights(int r) {
  if (r < 1 || r > kMaxDegree) throw std::out_of_range("degree out of range");
  std::vector<double> w(static_cast<std::size_t>(r) + 1);
  for (int i = 0; i <= r; ++i) {
    auto phi = [r, i](double u) {
      std::array<double, kMaxDegree + 1> vals{};
      lagrange_nodes(r, r * u, vals.data());
      return vals[static_cast<std::size_t>(i)];
    };
    w[static_cast<std::size_t>(i)] = boost::math::quadrature::gauss<double, 10>::integrate(phi, 0.0, 1.0);
  }
  return w;
}

std::vector<double> composite_axis_weights(int k, int r) {
  const MeshSpec spec{k, r, 1};
  validate(spec);
  const auto nc = newton_cotes_weights(r);
  const double h = std::ldexp(1.0, -k);
  std::vector<double> w(spec.per_axis(), 0.0);
  for (std::uint64_t c = 0; c < spec.cubes_per_axis(); ++c)
    for (int i = 0; i <= r; ++i) w[c * static_cast<std::uint64_t>(r) + static_cast<std::uint64_t>(i)] += h * nc[static_cast<std::size_t>(i)];
  return w;
}

double lebesgue_constant(int r) {
  if (r < 1 || r > kMaxDegree) throw std::out_of_range("degree out of range");
  constexpr int samples = 20000;
  double best = 1.0;
  std::array<double, kMaxDegree + 1> vals{};
  for (int q = 0; q <= samples; ++q) {
    lagrange_nodes(r, r * static_cast<double>(q) / samples, vals.data());
    double sum = 0.0;
    for (int i = 0; i <= r; ++i) sum += std::abs(vals[static_cast<std::size_t>(i)]);
    best = std::max(best, sum);
  }
  return best;
}

double interpolation_remainder_constant(int r, int d) {
  double fact = 1.0;
  for (int i = 2; i <= r; ++i) fact *= i;
  return (1.0 + std::pow(lebesgue_constant(r), d)) * std::pow(0.5 * d, r) / fact;
}

}  // namespace parint
