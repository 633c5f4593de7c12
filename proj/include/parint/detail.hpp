// SPDX-License-Identifier: Apache-2.0
//
// Per-level detail functions, the fixed-point codec and the rectangle-rule
// discretization of the parameter integrals.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "parint/function.hpp"
#include "parint/grid.hpp"
#include "parint/quadrature.hpp"

namespace parint {

/// Fixed-point representation of reals with m* bits, m* even.
///
///   encode(z) = 0                            if z <  -2^{m*/2-1}
///             = 2^{m*} - 1                   if z >=  2^{m*/2-1}
///             = floor(2^{m*/2} (z + 2^{m*/2-1})) otherwise
///   decode(y) = 2^{-m*/2} y - 2^{m*/2-1}
///
/// so that decode(encode(z)) <= z < decode(encode(z)) + 2^{-m*/2} for |z| <= 1.
class FixedPointCodec {
 public:
  /// m_star must be even and in [2, 64].
  explicit FixedPointCodec(int m_star);

  /// Smallest even m* with 2^{m*/2-1} >= 1 and 2^{-m*/2} <= 2^{-rk} / n2.
  [[nodiscard]] static FixedPointCodec for_level(int r, int k, std::uint64_t n2);

  [[nodiscard]] int bits() const noexcept { return 2 * half_; }
  [[nodiscard]] int half() const noexcept { return half_; }
  /// 2^{-m*/2}
  [[nodiscard]] double resolution() const noexcept;

  [[nodiscard]] std::uint64_t encode(double z) const noexcept;
  /// Throws std::out_of_range when y >= 2^{m*}.
  [[nodiscard]] double decode(std::uint64_t y) const;
  [[nodiscard]] double quantize(double z) const noexcept;

 private:
  int half_;
};

/// Rectangle-rule nodes t_j = (j_1/b, ..., j_{d2}/b) on D2, j written in base b
/// with the first axis most significant.
class NodeSet {
 public:
  NodeSet(int d2, std::uint64_t base);

  /// b = 2^{rk} n2.
  [[nodiscard]] static NodeSet for_level(int r, int k, std::uint64_t n2, int d2);

  [[nodiscard]] int d2() const noexcept { return d2_; }
  [[nodiscard]] std::uint64_t base() const noexcept { return base_; }
  /// N = b^{d2}, or nullopt when it does not fit in 64 bits.
  [[nodiscard]] std::optional<std::uint64_t> size() const noexcept { return size_; }
  /// log2 N as a real, always available.
  [[nodiscard]] double log2_size() const noexcept;

  void digits(std::uint64_t j, std::span<std::uint64_t> out) const;
  [[nodiscard]] std::uint64_t index(std::span<const std::uint64_t> digits) const;
  void node(std::uint64_t j, std::span<double> t) const;

 private:
  int d2_;
  std::uint64_t base_;
  std::optional<std::uint64_t> size_;
};

/// Parameter node s at level k together with the coarse interpolation data
/// that defines f_{k,s}(t) = f(s,t) - sum_i w_i f(s_i,t).
///
/// The coarse cube is Q_{k-1,j(s)}, the smallest-index level-(k-1) cube that
/// contains s; the anchors s_i are its v = (r+1)^{d1} mesh nodes and
/// w_i = (R_{k-1,j(s)} phi_i)(s).
///
/// A start context has no anchors, so its detail function is f(s,.) itself.
struct DetailContext {
  int k = 0;
  int r = 1;
  int d1 = 1;
  std::vector<std::uint64_t> node;  // integer coordinates on the level-k mesh
  Point s;
  std::optional<CubeIndex> coarse;
  std::vector<Point> anchors;
  std::vector<double> weights;

  /// Context for the level-k mesh node with integer coordinates `coords`, k >= 1.
  [[nodiscard]] static DetailContext make(int k, int r, std::span<const std::uint64_t> coords);
  /// Start-level context: no subtraction.
  [[nodiscard]] static DetailContext start(int k, int r, std::span<const std::uint64_t> coords);

  /// sum_i |w_i|, or 0 for a start context.
  [[nodiscard]] double weight_l1() const noexcept;
};

/// f_{k,s}(t). Evaluates f exactly v+1 times (once for a start context).
[[nodiscard]] double detail_eval(const SmoothFunction& f, const DetailContext& ctx,
                                 std::span<const double> t);

/// gamma(beta(f(s,t))) - sum_i w_i gamma(beta(f(s_i,t))). Terms with w_i = 0 are
/// skipped; they contribute exactly zero.
[[nodiscard]] double quantized_detail_eval(const SmoothFunction& f, const DetailContext& ctx,
                                           const FixedPointCodec& codec, std::span<const double> t);

/// Largest node count discretize() will materialize.
inline constexpr std::uint64_t kMaxMaterializedNodes = std::uint64_t{1} << 24;

/// (Gamma_{k,s} f)(j) for j < N. Throws std::invalid_argument when the codec is
/// too coarse for the node set (2^{-m*/2} > 1/b) and std::length_error when N
/// exceeds kMaxMaterializedNodes.
[[nodiscard]] std::vector<double> discretize(const SmoothFunction& f, const DetailContext& ctx,
                                             const NodeSet& nodes, const FixedPointCodec& codec);

/// Mean of the discretized array without storing it. Same checks as
/// discretize() except the size limit.
[[nodiscard]] double discretized_mean(const SmoothFunction& f, const DetailContext& ctx,
                                      const NodeSet& nodes, const FixedPointCodec& codec);

/// Arithmetic mean. Throws std::invalid_argument on empty input.
[[nodiscard]] double rectangle_rule(std::span<const double> values);

/// Resolution of the reference quadrature over D2.
struct ReferenceResolution {
  int panels = 16;
  int points = 8;
};

/// Largest tensor node count reference_integral() accepts.
inline constexpr std::uint64_t kMaxReferenceNodes = std::uint64_t{1} << 24;

/// int_{D2} f(s,t) dt by composite Gauss-Legendre quadrature.
[[nodiscard]] double reference_integral(const SmoothFunction& f, std::span<const double> s,
                                        ReferenceResolution res = {});

/// int_{D2} of the quantized detail function, same rule.
[[nodiscard]] double quantized_detail_integral(const SmoothFunction& f, const DetailContext& ctx,
                                               const FixedPointCodec& codec, const AxisRule& rule,
                                               double* sup_abs = nullptr);

}  // namespace parint
