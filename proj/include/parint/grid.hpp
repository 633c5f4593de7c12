// SPDX-License-Identifier: Apache-2.0
//
// Dyadic meshes on [0,1]^d, tensor-product Lagrange bases and the composite
// degree-r interpolation operator built on them.
//
// Conventions used throughout the library:
//   * The level-k mesh has r*2^k + 1 equispaced points per axis, spacing
//     1/(r*2^k). Points are ordered lexicographically by their integer
//     coordinates (i_1, ..., i_d) with i_1 most significant.
//   * The partition at level k consists of 2^{dk} cubes of side 2^{-k},
//     flat-indexed lexicographically by cube coordinates (c_1, ..., c_d).
//   * Local basis indices are base-(r+1) numbers with the first axis most
//     significant.
//   * A point on a shared face belongs to the cube with the smallest flat
//     index; the interpolant is continuous, so this choice never changes a
//     value.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace parint {

using Point = std::vector<double>;

inline constexpr int kMaxDegree = 8;
inline constexpr int kMaxDimension = 6;

struct MeshSpec {
  int k = 0;
  int r = 1;
  int d = 1;

  /// r * 2^k + 1
  [[nodiscard]] std::uint64_t per_axis() const;
  /// (r * 2^k + 1)^d; throws std::overflow_error if it does not fit.
  [[nodiscard]] std::uint64_t point_count() const;
  /// 2^k
  [[nodiscard]] std::uint64_t cubes_per_axis() const;

  friend bool operator==(const MeshSpec&, const MeshSpec&) = default;
};

/// Throws std::invalid_argument on k < 0, r outside [1, kMaxDegree], d outside
/// [1, kMaxDimension], or when the point count overflows.
void validate(const MeshSpec& spec);

[[nodiscard]] std::vector<std::uint64_t> mesh_coords(const MeshSpec& spec, std::uint64_t flat);
[[nodiscard]] std::uint64_t mesh_flat(const MeshSpec& spec, std::span<const std::uint64_t> coords);
[[nodiscard]] Point mesh_point(const MeshSpec& spec, std::uint64_t flat);
[[nodiscard]] std::vector<Point> mesh_points(const MeshSpec& spec);

/// True when the level-k mesh point also belongs to the level-(k-1) mesh
/// (every integer coordinate even). Always false at k = 0.
[[nodiscard]] bool on_coarser_mesh(const MeshSpec& spec, std::span<const std::uint64_t> coords);

/// An axis-aligned cube Q_kj of side 2^{-k}.
struct CubeIndex {
  int k = 0;
  std::uint64_t j = 0;
  std::vector<std::uint64_t> coords;
  /// Corner of smallest Euclidean norm, 2^{-k} * coords.
  Point anchor;

  [[nodiscard]] static CubeIndex from_flat(int k, int d, std::uint64_t j);
  [[nodiscard]] static CubeIndex from_coords(int k, std::span<const std::uint64_t> coords);
  [[nodiscard]] bool contains(std::span<const double> s) const;
};

/// The cube of the level-k partition holding s, smallest flat index on ties.
[[nodiscard]] CubeIndex containing_cube(int k, std::span<const double> s);

/// 1-D Lagrange basis of degree r on the nodes {0, 1/r, ..., 1}, evaluated at u.
[[nodiscard]] double lagrange_1d(int r, int i, double u);

/// Tensor basis function phi_i on the level-0 mesh of [0,1]^d.
[[nodiscard]] double lagrange_basis_eval(std::uint64_t i, std::span<const double> s, int r, int d);

using ScalarField = std::function<double(std::span<const double>)>;

/// (R_kj g)(s) = g(2^k (s - s_kj)) on Q_kj, zero elsewhere.
[[nodiscard]] ScalarField restrict_scale(ScalarField g, const CubeIndex& cube);

/// Composite tensor-product Lagrange interpolant of degree r on the level-k
/// mesh, stored by its nodal values in mesh order.
class PiecewiseLagrange {
 public:
  PiecewiseLagrange(MeshSpec spec, std::vector<double> coefficients);

  [[nodiscard]] const MeshSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] std::span<const double> coefficients() const noexcept { return coefficients_; }

  /// Throws std::domain_error when s is outside [0,1]^d.
  [[nodiscard]] double operator()(std::span<const double> s) const;

  /// Exact integral over [0,1]^d.
  [[nodiscard]] double integral() const;

 private:
  MeshSpec spec_;
  std::vector<double> coefficients_;
  std::vector<std::uint64_t> strides_;
};

/// Sample a field on the mesh.
[[nodiscard]] std::vector<double> sample_on_mesh(const MeshSpec& spec, const ScalarField& g);

/// (P_k z)(s) for nodal values z.
[[nodiscard]] double interpolate(const MeshSpec& spec, std::span<const double> samples,
                                 std::span<const double> s);

/// Probe points per axis used for sup-norm measurements at level k: 64 * 2^k + 1.
[[nodiscard]] std::uint64_t probe_points_per_axis(int k);

/// Visit every point of the equispaced grid with `per_axis` points per axis of
/// [0,1]^d, in lexicographic order.
void for_each_grid_point(int d, std::uint64_t per_axis,
                         const std::function<void(std::span<const double>)>& visit);

/// max |P_k z| over the level-k probe grid.
[[nodiscard]] double interpolant_sup_norm_ratio(const MeshSpec& spec, std::span<const double> samples);

/// int_0^1 of each degree-r Lagrange basis function (closed Newton-Cotes weights).
[[nodiscard]] std::vector<double> newton_cotes_weights(int r);

/// Quadrature weights of the composite rule on the level-k axis mesh.
[[nodiscard]] std::vector<double> composite_axis_weights(int k, int r);

/// Lebesgue constant of equispaced degree-r interpolation on [0,1].
[[nodiscard]] double lebesgue_constant(int r);

/// C such that sup |g - P_k g| <= C * ||g||_{C^r} * 2^{-rk} on [0,1]^d:
/// (1 + Lambda_r^d) (d/2)^r / r!, from the Taylor remainder about cube centres.
[[nodiscard]] double interpolation_remainder_constant(int r, int d);

}  // namespace parint
