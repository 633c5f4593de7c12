// SPDX-License-Identifier: Apache-2.0
#include "parint/detail.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace parint {

FixedPointCodec::FixedPointCodec(int m_star) : half_(m_star / 2) {
  if (m_star < 2 || m_star > 64 || m_star % 2 != 0)
    throw std::invalid_argument("codec width must be even and in [2, 64]");
}

FixedPointCodec FixedPointCodec::for_level(int r, int k, std::uint64_t n2) {
  if (r < 1 || k < 0 || n2 < 1) throw std::invalid_argument("invalid codec level parameters");
  const int log_n2 = n2 == 1 ? 0 : static_cast<int>(std::bit_width(n2 - 1));
  const long half = std::max(1L, static_cast<long>(r) * k + log_n2);
  if (half > 32) throw std::invalid_argument("codec would need more than 64 bits");
  return FixedPointCodec(static_cast<int>(2 * half));
}

double FixedPointCodec::resolution() const noexcept { return std::ldexp(1.0, -half_); }

std::uint64_t FixedPointCodec::encode(double z) const noexcept {
  const double lo = -std::ldexp(1.0, half_ - 1);
  if (!(z >= lo)) return 0;  // also maps NaN to 0
  if (z >= -lo) return bits() == 64 ? std::numeric_limits<std::uint64_t>::max()
                                    : (std::uint64_t{1} << bits()) - 1;
  const auto scaled = static_cast<std::int64_t>(std::floor(std::ldexp(z, half_)));
  const std::uint64_t offset = std::uint64_t{1} << (bits() - 1);
  return offset + static_cast<std::uint64_t>(scaled);
}

double FixedPointCodec::decode(std::uint64_t y) const {
  if (bits() < 64 && y >= (std::uint64_t{1} << bits())) throw std::out_of_range("codec word out of range");
  const std::uint64_t offset = std::uint64_t{1} << (bits() - 1);
  const auto centred = static_cast<std::int64_t>(y - offset);
  return std::ldexp(static_cast<double>(centred), -half_);
}

double FixedPointCodec::quantize(double z) const noexcept {
  const double lo = -std::ldexp(1.0, half_ - 1);
  if (!(z >= lo)) return lo;
  if (z >= -lo) return -lo - resolution();
  return std::ldexp(std::floor(std::ldexp(z, half_)), -half_);
}

NodeSet::NodeSet(int d2, std::uint64_t base) : d2_(d2), base_(base) {
  if (d2 < 1 || d2 > kMaxDimension) throw std::invalid_argument("node set dimension out of range");
  if (base < 1) throw std::invalid_argument("node set base must be positive");
  std::uint64_t n = 1;
  for (int a = 0; a < d2; ++a) {
    if (n > std::numeric_limits<std::uint64_t>::max() / base) return;
    n *= base;
  }
  size_ = n;
}

NodeSet NodeSet::for_level(int r, int k, std::uint64_t n2, int d2) {
  const long shift = static_cast<long>(r) * k;
  if (r < 1 || k < 0 || n2 < 1 || shift >= 64 || (n2 >> (63 - shift)) != 0)
    throw std::overflow_error("rectangle-rule base does not fit in 64 bits");
  return NodeSet(d2, n2 << shift);
}

double NodeSet::log2_size() const noexcept { return d2_ * std::log2(static_cast<double>(base_)); }

void NodeSet::digits(std::uint64_t j, std::span<std::uint64_t> out) const {
  if (out.size() != static_cast<std::size_t>(d2_)) throw std::invalid_argument("digit buffer size mismatch");
  if (size_ && j >= *size_) throw std::out_of_range("node index out of range");
  for (int a = d2_ - 1; a >= 0; --a) {
    out[static_cast<std::size_t>(a)] = j % base_;
    j /= base_;
  }
}

std::uint64_t NodeSet::index(std::span<const std::uint64_t> digits) const {
  if (!size_) throw std::overflow_error("node set too large for a 64-bit index");
  if (digits.size() != static_cast<std::size_t>(d2_)) throw std::invalid_argument("digit count mismatch");
  std::uint64_t j = 0;
  for (auto dgt : digits) {
    if (dgt >= base_) throw std::out_of_range("digit out of range");
    j = j * base_ + dgt;
  }
  return j;
}

void NodeSet::node(std::uint64_t j, std::span<double> t) const {
  std::array<std::uint64_t, kMaxDimension> dg{};
  digits(j, std::span(dg.data(), static_cast<std::size_t>(d2_)));
  for (int a = 0; a < d2_; ++a)
    t[static_cast<std::size_t>(a)] = static_cast<double>(dg[static_cast<std::size_t>(a)]) / static_cast<double>(base_);
}

DetailContext DetailContext::start(int k, int r, std::span<const std::uint64_t> coords) {
  const MeshSpec spec{k, r, static_cast<int>(coords.size())};
  validate(spec);
  DetailContext ctx;
  ctx.k = k;
  ctx.r = r;
  ctx.d1 = spec.d;
  ctx.node.assign(coords.begin(), coords.end());
  ctx.s = mesh_point(spec, mesh_flat(spec, coords));
  return ctx;
}

DetailContext DetailContext::make(int k, int r, std::span<const std::uint64_t> coords) {
  if (k < 1) throw std::invalid_argument("detail context needs level k >= 1");
  DetailContext ctx = start(k, r, coords);
  const auto d = static_cast<std::size_t>(ctx.d1);
  const auto two_r = 2 * static_cast<std::uint64_t>(r);

  std::vector<std::uint64_t> cube(d);
  std::vector<std::array<double, kMaxDegree + 1>> axis_w(d);
  for (std::size_t a = 0; a < d; ++a) {
    cube[a] = coords[a] == 0 ? 0 : (coords[a] - 1) / two_r;
    const double x = static_cast<double>(coords[a] - two_r * cube[a]) / 2.0;  // r*u, exact
    for (int i = 0; i <= r; ++i) axis_w[a][static_cast<std::size_t>(i)] = lagrange_1d(r, i, x / r);
  }
  ctx.coarse = CubeIndex::from_coords(k - 1, cube);

  const MeshSpec local{0, r, ctx.d1};
  const std::uint64_t v = local.point_count();
  ctx.anchors.reserve(v);
  ctx.weights.reserve(v);
  for (std::uint64_t i = 0; i < v; ++i) {
    const auto li = mesh_coords(local, i);
    Point p(d);
    double w = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
      const auto coarse_idx = static_cast<std::uint64_t>(r) * cube[a] + li[a];
      p[a] = std::ldexp(static_cast<double>(coarse_idx) / r, -(k - 1));
      w *= axis_w[a][li[a]];
    }
    ctx.anchors.push_back(std::move(p));
    ctx.weights.push_back(w);
  }
  return ctx;
}

double DetailContext::weight_l1() const noexcept {
  double acc = 0.0;
  for (double w : weights) acc += std::abs(w);
  return acc;
}

double detail_eval(const SmoothFunction& f, const DetailContext& ctx, std::span<const double> t) {
  double v = f(ctx.s, t);
  for (std::size_t i = 0; i < ctx.anchors.size(); ++i) v -= ctx.weights[i] * f(ctx.anchors[i], t);
  return v;
}

double quantized_detail_eval(const SmoothFunction& f, const DetailContext& ctx,
                             const FixedPointCodec& codec, std::span<const double> t) {
  double v = codec.quantize(f(ctx.s, t));
  for (std::size_t i = 0; i < ctx.anchors.size(); ++i) {
    if (ctx.weights[i] == 0.0) continue;
    v -= ctx.weights[i] * codec.quantize(f(ctx.anchors[i], t));
  }
  return v;
}

namespace {

void check_codec(const NodeSet& nodes, const FixedPointCodec& codec) {
  const int h = codec.half();
  if (h < 64 && (std::uint64_t{1} << h) < nodes.base())
    throw std::invalid_argument("codec resolution too coarse for the node set");
}

template <class Visit>
void for_each_node(const NodeSet& nodes, Visit&& visit) {
  const auto n = nodes.size();
  if (!n) throw std::length_error("node set too large to enumerate");
  const auto d2 = static_cast<std::size_t>(nodes.d2());
  std::vector<std::uint64_t> dg(d2, 0);
  std::vector<double> t(d2, 0.0);
  const double b = static_cast<double>(nodes.base());
  for (std::uint64_t j = 0; j < *n; ++j) {
    visit(j, std::span<const double>(t));
    for (std::size_t a = d2; a-- > 0;) {
      if (++dg[a] < nodes.base()) {
        t[a] = static_cast<double>(dg[a]) / b;
        break;
      }
      dg[a] = 0;
      t[a] = 0.0;
    }
  }
}

}  // namespace

std::vector<double> discretize(const SmoothFunction& f, const DetailContext& ctx,
                               const NodeSet& nodes, const FixedPointCodec& codec) {
  check_codec(nodes, codec);
  if (nodes.d2() != f.d2()) throw std::invalid_argument("node set dimension does not match f");
  if (!nodes.size() || *nodes.size() > kMaxMaterializedNodes)
    throw std::length_error("node set too large to materialize");
  std::vector<double> out(*nodes.size());
  for_each_node(nodes, [&](std::uint64_t j, std::span<const double> t) {
    out[j] = quantized_detail_eval(f, ctx, codec, t);
  });
  return out;
}

double discretized_mean(const SmoothFunction& f, const DetailContext& ctx, const NodeSet& nodes,
                        const FixedPointCodec& codec) {
  check_codec(nodes, codec);
  if (nodes.d2() != f.d2()) throw std::invalid_argument("node set dimension does not match f");
  double acc = 0.0;
  for_each_node(nodes, [&](std::uint64_t, std::span<const double> t) {
    acc += quantized_detail_eval(f, ctx, codec, t);
  });
  return acc / static_cast<double>(*nodes.size());
}

double rectangle_rule(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("rectangle rule needs at least one value");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double reference_integral(const SmoothFunction& f, std::span<const double> s, ReferenceResolution res) {
  const auto rule = composite_gauss_legendre(res.panels, res.points);
  const double per_axis = static_cast<double>(rule.nodes.size());
  if (std::pow(per_axis, f.d2()) > static_cast<double>(kMaxReferenceNodes))
    throw std::length_error("reference quadrature resolution too large");
  return integrate_unit_cube(f.d2(), rule, [&](std::span<const double> t) { return f(s, t); });
}

double quantized_detail_integral(const SmoothFunction& f, const DetailContext& ctx,
                                 const FixedPointCodec& codec, const AxisRule& rule, double* sup_abs) {
  double sup = 0.0;
  const double v = integrate_unit_cube(f.d2(), rule, [&](std::span<const double> t) {
    const double x = quantized_detail_eval(f, ctx, codec, t);
    sup = std::max(sup, std::abs(x));
    return x;
  });
  if (sup_abs != nullptr) *sup_abs = sup;
  return v;
}

}  // namespace parint
