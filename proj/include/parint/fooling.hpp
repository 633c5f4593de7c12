// SPDX-License-Identifier: Apache-2.0
//
// Disjointly supported bump functions used as an adversarial corpus with
// closed-form parametric integrals.
//
// D = [0,1]^{d1+d2} is split into L = m^{d1+d2} cells of side 1/m. Cell i has
// integer coordinates (j_1, ..., j_{d1+d2}) (i in base m, first axis most
// significant) and carries
//
//   psi_i(s, t) = prod_l eta(m s_l - j_l) * prod_l eta(m t_l - j_l),
//   eta(x) = exp(-1 / (x (1 - x))) on (0, 1), 0 elsewhere.
//
// With norm_gamma = max_{|k| <= r} prod_l sup |eta^{(k_l)}| the scaled bumps
// psi_i / (norm_gamma m^r) lie in the unit ball of C^r, and so does
// f_u = sum_i u_i psi_i / (norm_gamma m^r) for every bit vector u.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "parint/function.hpp"
#include "parint/random.hpp"

namespace parint {

[[nodiscard]] double eta(double x) noexcept;

/// eta and its first `order` derivatives at x (zero outside (0, 1)).
[[nodiscard]] std::vector<double> eta_jet(double x, int order);

/// int_0^1 eta, by adaptive quadrature; cached.
[[nodiscard]] double sigma0();

/// sup over [0,1] of |eta^{(j)}|, j = 0..order; cached per order.
[[nodiscard]] std::vector<double> eta_derivative_sups(int order);

/// max over multi-indices k in N^d with |k| <= r of prod_l sup |eta^{(k_l)}|.
[[nodiscard]] double norm_gamma(int r, int d);

struct BumpFamily {
  int m = 2;
  int r = 1;
  int d1 = 1;
  int d2 = 1;
  std::uint64_t cells = 0;  // L
  double norm_gamma = 0.0;
  double sigma0 = 0.0;

  /// Throws std::invalid_argument for odd or non-positive m, and when L
  /// exceeds 2^24.
  [[nodiscard]] static BumpFamily make(int m, int r, int d1, int d2);

  /// 1 / (norm_gamma m^r)
  [[nodiscard]] double scale() const noexcept;
  [[nodiscard]] std::vector<std::uint64_t> cell_coords(std::uint64_t i) const;
};

/// psi_i at x = (s, t) (unnormalized).
[[nodiscard]] double bump_function(const BumpFamily& family, std::uint64_t i, std::span<const double> x);

/// psi_i^{(1)}(s): the parameter factor of bump i.
[[nodiscard]] double bump_parameter_factor(const BumpFamily& family, std::uint64_t i, std::span<const double> s);

/// f_u with norm bound 1 and the closed-form solution
/// (S f_u)(s) = sum_i u_i sigma0^{d2} / (norm_gamma m^{r+d2}) psi_i^{(1)}(s).
[[nodiscard]] SmoothFunction fooling_instance(const BumpFamily& family, const std::vector<bool>& u);

/// e^{-4 d1} sigma0^{d2} / (norm_gamma m^{r+d2}) = sup |S psi_0 / (norm_gamma m^r)|.
[[nodiscard]] double single_bump_solution_norm(const BumpFamily& family);

/// sqrt(L / |l - l'|) + min_{j in {l, l'}} sqrt(j (L - j)) / |l - l'|, for
/// 0 <= l, l' <= L and l != l'.
[[nodiscard]] double rho(std::uint64_t cells, std::uint64_t l, std::uint64_t l_prime);

/// Bit vector as hex: u_0 is the most significant bit of the first digit,
/// zero-padded to a multiple of 4 bits.
[[nodiscard]] std::string bits_to_hex(const std::vector<bool>& u);
/// Inverse of bits_to_hex; throws std::invalid_argument on bad digits, wrong
/// length or nonzero padding.
[[nodiscard]] std::vector<bool> hex_to_bits(const std::string& hex, std::uint64_t length);

/// Instance list of a corpus: u = 0, u = e_0, an adjacent pair with |u| =
/// L/2 - 1 and |u'| = L/2 differing in one bit, then `random_count` uniform
/// bit vectors.
[[nodiscard]] std::vector<std::vector<bool>> fooling_corpus(const BumpFamily& family, std::uint64_t random_count,
                                                            std::uint64_t seed);

/// {"family": {m, r, d1, d2, cells, norm_gamma, sigma0}, "instances": [{id, weight, u}]}
[[nodiscard]] nlohmann::json corpus_manifest(const BumpFamily& family, const std::vector<std::vector<bool>>& corpus);

/// Central finite-difference proxy of the C^r norm: max over |k| <= r of
/// sampled |d^k g| with step h, on `samples` uniform random interior points.
[[nodiscard]] double sampled_cr_norm(const SmoothFunction& f, int r, std::uint64_t samples, std::uint64_t seed,
                                     double h = 0x1.0p-12);

}  // namespace parint
