// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parint {

/// An integrand f(s, t) on D1 x D2 = [0,1]^d1 x [0,1]^d2 together with its
/// class membership metadata: smoothness order r and a declared bound on
/// max_{|alpha| <= r} sup |d^alpha f|. The problem class is the unit ball, so
/// algorithms that rely on it check `norm_bound() <= 1`.
///
/// Evaluation must be reentrant.
class SmoothFunction {
 public:
  using Eval = std::function<double(std::span<const double> s, std::span<const double> t)>;
  using Solution = std::function<double(std::span<const double> s)>;

  SmoothFunction(std::string name, int d1, int d2, int r, double norm_bound, Eval eval,
                 Solution solution = {});

  double operator()(std::span<const double> s, std::span<const double> t) const {
    return eval_(s, t);
  }

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] int d1() const noexcept { return d1_; }
  [[nodiscard]] int d2() const noexcept { return d2_; }
  [[nodiscard]] int r() const noexcept { return r_; }
  [[nodiscard]] double norm_bound() const noexcept { return norm_bound_; }

  /// Closed-form s -> integral of f(s, .) over D2, when the function knows it.
  [[nodiscard]] bool has_solution() const noexcept { return static_cast<bool>(solution_); }
  [[nodiscard]] double solution(std::span<const double> s) const;

 private:
  std::string name_;
  int d1_;
  int d2_;
  int r_;
  double norm_bound_;
  Eval eval_;
  Solution solution_;
};

/// Hoelder exponent of the r-th derivatives in the limited-smoothness test
/// functions ("power", "kink").
inline constexpr double kTestHoelderExponent = 0.1;

/// f(s, t) = c.
[[nodiscard]] SmoothFunction constant_function(double c, int d1, int d2, int r);

/// Named test integrands:
///
///   power  : A * mean_a s_a^(r+0.1) * prod_b exp(-t_b)
///   kink   : A * mean_a |s_a - 1/3|^(r+0.1) * prod_b cos(t_b + 0.3)
///   lacunary : prod_a W(s_a) * prod_b exp(-t_b), W a lacunary cosine series
///              whose r-th derivative is Hoelder-0.1 at every point
///   wave   : sin(sum_a s_a + sum_b t_b + 0.5)
///   sinsin : prod_a sin(2 pi s_a) * prod_b sin(2 pi t_b) / (2 pi)^(d1+d2)
///   const  : 1/2
///
/// A normalizes the C^r norm to 1. All carry closed-form solutions.
[[nodiscard]] SmoothFunction make_test_function(std::string_view id, int r, int d1, int d2);

[[nodiscard]] std::vector<std::string> test_function_ids();

/// Highest frequency index of the lacunary series.
inline constexpr int kLacunaryTerms = 20;

/// The rate-measurement corpus (lacunary first): members of the unit ball of C^r whose r-th
/// derivatives are only Hoelder-0.1 continuous in the parameter, so composite
/// degree-r interpolation converges at (close to) the class rate 2^{-rk}
/// rather than the superconvergent 2^{-(r+1)k} seen on analytic functions.
[[nodiscard]] std::vector<SmoothFunction> smooth_corpus(int r, int d1, int d2);

}  // namespace parint
