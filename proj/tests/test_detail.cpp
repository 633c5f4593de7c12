// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "parint/detail.hpp"
#include "parint/function.hpp"
#include "parint/grid.hpp"
#include "parint/random.hpp"

using namespace parint;
using std::numbers::pi;

namespace {

SmoothFunction product(int r, double (*a)(double), double (*b)(double)) {
  return SmoothFunction("product", 1, 1, r, 1.0,
                        [a, b](std::span<const double> s, std::span<const double> t) { return a(s[0]) * b(t[0]); });
}

DetailContext context_at(int k, int r, std::uint64_t coord) {
  const std::uint64_t c[1] = {coord};
  return DetailContext::make(k, r, c);
}

}  // namespace

TEST_CASE("codec examples") {
  const FixedPointCodec codec(8);
  CHECK(codec.encode(0.0) == 128);
  CHECK(codec.encode(-10.0) == 0);
  CHECK(codec.encode(10.0) == 255);
  CHECK(codec.decode(128) == 0.0);
  CHECK(codec.decode(0) == -8.0);
  CHECK_THROWS_AS((void)codec.decode(256), std::out_of_range);
  CHECK_THROWS_AS(FixedPointCodec(7), std::invalid_argument);
  CHECK_THROWS_AS(FixedPointCodec(66), std::invalid_argument);
}

TEST_CASE("codec round trip residual") {
  SplitMix64 gen(2024);
  for (int m : {8, 20, 40, 64}) {
    const FixedPointCodec codec(m);
    int violations = 0;
    for (int i = 0; i < 100000; ++i) {
      const double z = 2 * uniform01(gen) - 1;
      const double res = z - codec.decode(codec.encode(z));
      if (!(res >= 0.0 && res < codec.resolution())) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("codec monotonicity") {
  const FixedPointCodec codec(12);
  std::uint64_t prev = 0;
  for (int i = 0; i <= 4000; ++i) {
    const double z = -40.0 + 80.0 * i / 4000;
    const auto y = codec.encode(z);
    CHECK(y >= prev);
    prev = y;
  }
  for (std::uint64_t y = 1; y < 4096; ++y) CHECK(codec.decode(y) > codec.decode(y - 1));
}

TEST_CASE("codec for a level meets the precision contract") {
  for (int r = 1; r <= 3; ++r)
    for (int k = 0; k <= 8; ++k)
      for (std::uint64_t n2 : {1u, 2u, 3u, 64u, 100u}) {
        const auto codec = FixedPointCodec::for_level(r, k, n2);
        CHECK(codec.bits() % 2 == 0);
        CHECK(std::ldexp(1.0, codec.half() - 1) >= 1.0);
        CHECK(codec.resolution() <= std::ldexp(1.0, -r * k) / static_cast<double>(n2));
        // minimal: one bit less per half would break the contract
        if (codec.half() > 1)
          CHECK(std::ldexp(1.0, -(codec.half() - 1)) > std::ldexp(1.0, -r * k) / static_cast<double>(n2));
      }
}

TEST_CASE("node set digits round trip") {
  for (int d2 = 1; d2 <= 3; ++d2)
    for (std::uint64_t b : {2u, 5u, 16u, 40u}) {
      const NodeSet nodes(d2, b);
      const auto n = nodes.size();
      REQUIRE(n.has_value());
      if (*n > (1u << 16)) continue;
      std::vector<std::uint64_t> dig(static_cast<std::size_t>(d2));
      std::vector<double> t(static_cast<std::size_t>(d2));
      for (std::uint64_t j = 0; j < *n; ++j) {
        nodes.digits(j, dig);
        CHECK(nodes.index(dig) == j);
        nodes.node(j, t);
        for (int a = 0; a < d2; ++a) CHECK(t[a] == static_cast<double>(dig[a]) / static_cast<double>(b));
      }
    }
  const auto level = NodeSet::for_level(2, 3, 4, 2);
  CHECK(level.base() == 256);
  CHECK(*level.size() == 65536);
  CHECK(level.log2_size() == doctest::Approx(16.0));
}

TEST_CASE("detail context geometry") {
  for (int r = 1; r <= 3; ++r)
    for (int k = 1; k <= 4; ++k) {
      const MeshSpec mesh{k, r, 2};
      for (std::uint64_t i = 0; i < mesh.point_count(); ++i) {
        const auto coords = mesh_coords(mesh, i);
        if (on_coarser_mesh(mesh, coords)) continue;
        const auto ctx = DetailContext::make(k, r, coords);
        REQUIRE(ctx.coarse.has_value());
        CHECK(ctx.coarse->contains(ctx.s));
        CHECK(ctx.coarse->j == containing_cube(k - 1, ctx.s).j);
        CHECK(ctx.anchors.size() == static_cast<std::size_t>((r + 1) * (r + 1)));
        double sum = 0.0;
        for (double w : ctx.weights) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        const double h = std::ldexp(1.0 / r, -(k - 1));
        for (std::size_t a = 0; a < ctx.anchors.size(); ++a) {
          const std::uint64_t i0 = a / static_cast<std::size_t>(r + 1);
          const std::uint64_t i1 = a % static_cast<std::size_t>(r + 1);
          CHECK(ctx.anchors[a][0] == doctest::Approx(ctx.coarse->anchor[0] + h * static_cast<double>(i0)));
          CHECK(ctx.anchors[a][1] == doctest::Approx(ctx.coarse->anchor[1] + h * static_cast<double>(i1)));
        }
      }
    }
}

TEST_CASE("detail function examples") {
  const auto one = constant_function(1.0, 1, 1, 2);
  const auto poly = product(2, [](double s) { return s * s; }, [](double t) { return std::exp(t); });
  SplitMix64 gen(5);
  for (int k = 1; k <= 5; ++k) {
    const MeshSpec mesh{k, 2, 1};
    for (std::uint64_t i = 1; i < mesh.point_count(); i += 2) {
      const auto ctx = context_at(k, 2, i);
      const double t[1] = {uniform01(gen)};
      CHECK(std::abs(detail_eval(one, ctx, t)) <= 1e-14);
      CHECK(std::abs(detail_eval(poly, ctx, t)) <= 1e-13);
    }
  }

  // Independent residual: s = 3/16 lies in the coarse cube [0, 1/4] with
  // quadratic nodes 0, 1/8, 1/4 and local coordinate u = 3/4.
  const auto sc = product(2, [](double s) { return std::sin(2 * pi * s); }, [](double t) { return std::cos(2 * pi * t); });
  const auto ctx = context_at(3, 2, 3);
  CHECK(ctx.s[0] == 0.1875);
  const double u = 0.75;
  const double w0 = (u - 0.5) * (u - 1.0) / 0.5;
  const double w1 = u * (u - 1.0) / -0.25;
  const double w2 = u * (u - 0.5) / 0.5;
  for (double tt : {0.0, 0.1, 0.37, 0.9}) {
    const double t[1] = {tt};
    const double ref = std::cos(2 * pi * tt) * (std::sin(2 * pi * 0.1875) - w0 * std::sin(0.0) -
                                                w1 * std::sin(2 * pi * 0.125) - w2 * std::sin(2 * pi * 0.25));
    CHECK(std::abs(detail_eval(sc, ctx, t) - ref) <= 1e-12);
  }
}

TEST_CASE("detail vanishes on coarse nodes") {
  const auto f = make_test_function("power", 2, 1, 1);
  for (int k = 1; k <= 4; ++k) {
    const MeshSpec mesh{k, 2, 1};
    for (std::uint64_t i = 0; i < mesh.point_count(); i += 2) {
      const auto ctx = context_at(k, 2, i);
      for (double tt : {0.0, 0.3, 1.0}) {
        const double t[1] = {tt};
        CHECK(std::abs(detail_eval(f, ctx, t)) <= 1e-15);
      }
    }
  }
}

TEST_CASE("detail functions stay bounded with their t-derivatives") {
  // Sampled sup of |f_{k,s}| and of central differences in t up to order r.
  const int r = 2;
  for (const auto& f : smooth_corpus(r, 1, 1)) {
    double worst = 0.0;
    for (int k = 1; k <= 6; ++k) {
      const MeshSpec mesh{k, r, 1};
      for (std::uint64_t i = 1; i < mesh.point_count(); i += 2) {
        const auto ctx = context_at(k, r, i);
        const double h = 0x1.0p-7;
        for (int q = 1; q < 16; ++q) {
          const double tc = q / 16.0;
          const double tm[1] = {tc - h};
          const double t0[1] = {tc};
          const double tp[1] = {tc + h};
          const double fm = detail_eval(f, ctx, tm);
          const double f0 = detail_eval(f, ctx, t0);
          const double fp = detail_eval(f, ctx, tp);
          worst = std::max({worst, std::abs(f0), std::abs(fp - fm) / (2 * h), std::abs(fp - 2 * f0 + fm) / (h * h)});
        }
      }
    }
    CHECK(worst <= 1.0 + std::pow(lebesgue_constant(r), 1));
  }
}

TEST_CASE("discretization") {
  const int r = 2;
  const int k = 3;
  const std::uint64_t n2 = 4;
  const auto codec = FixedPointCodec::for_level(r, k, n2);
  const auto nodes = NodeSet::for_level(r, k, n2, 1);
  const auto ctx = context_at(k, r, 5);
  double wl1 = 0.0;
  for (double w : ctx.weights) wl1 += std::abs(w);
  CHECK(ctx.weight_l1() == doctest::Approx(wl1));

  const auto zero = constant_function(0.0, 1, 1, r);
  for (double x : discretize(zero, ctx, nodes, codec)) CHECK(x == 0.0);

  const auto one = constant_function(1.0, 1, 1, r);
  for (double x : discretize(one, ctx, nodes, codec)) CHECK(std::abs(x) <= codec.resolution() * (1 + wl1));

  const auto f = make_test_function("kink", r, 1, 1);
  const auto arr = discretize(f, ctx, nodes, codec);
  REQUIRE(arr.size() == *nodes.size());
  std::vector<double> exact(arr.size());
  std::vector<double> t(1);
  for (std::uint64_t j = 0; j < arr.size(); ++j) {
    nodes.node(j, t);
    exact[j] = detail_eval(f, ctx, t);
    CHECK(std::abs(arr[j] - exact[j]) <= codec.resolution() * (1 + wl1));
  }
  const double mean_q = rectangle_rule(arr);
  const double j_rect = rectangle_rule(exact);
  const double bound = std::ldexp(1.0, -r * k) / static_cast<double>(n2);
  CHECK(std::abs(mean_q - j_rect) <= (1 + wl1) * bound);
  CHECK(discretized_mean(f, ctx, nodes, codec) == doctest::Approx(mean_q).epsilon(1e-14));

  // rectangle rule against the reference integral of the detail function
  const SmoothFunction detail("detail", 1, 1, r, 1.0, [&](std::span<const double>, std::span<const double> tt) {
    return detail_eval(f, ctx, tt);
  });
  const double zero_s[1] = {0.0};
  CHECK(std::abs(j_rect - reference_integral(detail, zero_s)) <= bound);

  // a codec too coarse for the node set is rejected
  CHECK_THROWS_AS((void)discretize(f, ctx, NodeSet(1, 1u << 20), FixedPointCodec(8)), std::invalid_argument);
}

TEST_CASE("rectangle rule") {
  const std::vector<double> c(7, 2.5);
  CHECK(rectangle_rule(c) == 2.5);
  const NodeSet nodes(1, 4);
  std::vector<double> vals;
  std::vector<double> t(1);
  for (std::uint64_t j = 0; j < 4; ++j) {
    nodes.node(j, t);
    vals.push_back(t[0]);
  }
  CHECK(rectangle_rule(vals) == 0.375);
  CHECK_THROWS_AS((void)rectangle_rule(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("reference integral") {
  const double s[1] = {0.5};
  CHECK(reference_integral(constant_function(1.0, 1, 1, 1), s) == doctest::Approx(1.0).epsilon(1e-12));
  const SmoothFunction sine("sine", 1, 1, 1, 1.0, [](auto, std::span<const double> t) { return std::sin(2 * pi * t[0]); });
  CHECK(std::abs(reference_integral(sine, s)) <= 1e-10);
  const SmoothFunction st("st", 1, 1, 1, 1.0, [](std::span<const double> x, std::span<const double> t) { return x[0] * t[0]; });
  CHECK(std::abs(reference_integral(st, s) - 0.25) <= 1e-10);
  const SmoothFunction wide("wide", 1, 4, 1, 1.0, [](auto, auto) { return 1.0; });
  CHECK_THROWS_AS((void)reference_integral(wide, s, {64, 20}), std::length_error);
}
