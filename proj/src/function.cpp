// SPDX-License-Identifier: Apache-2.0
#include "parint/function.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace parint {

SmoothFunction::SmoothFunction(std::string name, int d1, int d2, int r, double norm_bound,
                               Eval eval, Solution solution)
    : name_(std::move(name)),
      d1_(d1),
      d2_(d2),
      r_(r),
      norm_bound_(norm_bound),
      eval_(std::move(eval)),
      solution_(std::move(solution)) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("SmoothFunction: dimensions must be >= 1");
  if (r < 1) throw std::invalid_argument("SmoothFunction: smoothness order must be >= 1");
  if (!(norm_bound >= 0.0)) throw std::invalid_argument("SmoothFunction: negative norm bound");
  if (!eval_) throw std::invalid_argument("SmoothFunction: empty evaluator");
}

double SmoothFunction::solution(std::span<const double> s) const {
  if (!solution_) throw std::logic_error("SmoothFunction '" + name_ + "' has no closed-form solution");
  return solution_(s);
}

SmoothFunction constant_function(double c, int d1, int d2, int r) {
  return SmoothFunction(
      "const", d1, d2, r, std::abs(c), [c](auto, auto) { return c; },
      [c](auto) { return c; });
}

namespace {

// prod_{i<r} (beta - i): the largest derivative factor of x^beta on [0,1].
double falling_factorial(double beta, int r) {
  double p = 1.0;
  for (int i = 0; i < r; ++i) p *= beta - i;
  return p;
}

}  // namespace

SmoothFunction make_test_function(std::string_view id, int r, int d1, int d2) {
  using std::numbers::pi;
  if (id == "const") return constant_function(0.5, d1, d2, r);

  if (id == "power") {
    const double beta = r + kTestHoelderExponent;
    const double amp = 1.0 / falling_factorial(beta, r);
    const double t_integral = std::pow(1.0 - std::exp(-1.0), d2);
    auto s_part = [beta, amp, d1](std::span<const double> s) {
      double acc = 0.0;
      for (double x : s) acc += std::pow(x, beta);
      return amp * acc / d1;
    };
    return SmoothFunction(
        "power", d1, d2, r, 1.0,
        [s_part](std::span<const double> s, std::span<const double> t) {
          double h = 1.0;
          for (double y : t) h *= std::exp(-y);
          return s_part(s) * h;
        },
        [s_part, t_integral](std::span<const double> s) { return s_part(s) * t_integral; });
  }

  if (id == "lacunary") {
    // W(x) = Z^{-1} sum_{j<=J} 2^{-(r+a)j} cos(2^j x + j) with Z = sum_j 2^{-aj},
    // which bounds every derivative of order <= r by 1.
    double z = 0.0;
    for (int j = 0; j <= kLacunaryTerms; ++j) z += std::exp2(-kTestHoelderExponent * j);
    const double beta = r + kTestHoelderExponent;
    std::array<double, kLacunaryTerms + 1> coef{}, cj{}, sj{};
    for (int j = 0; j <= kLacunaryTerms; ++j) {
      coef[j] = std::exp2(-beta * j) / z;
      cj[j] = std::cos(static_cast<double>(j));
      sj[j] = std::sin(static_cast<double>(j));
    }
    // cos(2^j x) by repeated squaring of e^{ix}; the angle error doubles per
    // step but the weights fall faster.
    auto w = [coef, cj, sj](double x) {
      double c = std::cos(x);
      double sn = std::sin(x);
      double acc = 0.0;
      for (int j = 0; j <= kLacunaryTerms; ++j) {
        acc += coef[j] * (c * cj[j] - sn * sj[j]);
        const double c2 = c * c - sn * sn;
        sn = 2.0 * c * sn;
        c = c2;
      }
      return acc;
    };
    const double t_integral = std::pow(1.0 - std::exp(-1.0), d2);
    return SmoothFunction(
        "lacunary", d1, d2, r, 1.0,
        [w](std::span<const double> s, std::span<const double> t) {
          double v = 1.0;
          for (double x : s) v *= w(x);
          for (double y : t) v *= std::exp(-y);
          return v;
        },
        [w, t_integral](std::span<const double> s) {
          double v = t_integral;
          for (double x : s) v *= w(x);
          return v;
        });
  }

  if (id == "kink") {
    const double beta = r + kTestHoelderExponent;
    const double amp = 1.0 / falling_factorial(beta, r);
    const double t_integral = std::pow(std::sin(1.3) - std::sin(0.3), d2);
    auto s_part = [beta, amp, d1](std::span<const double> s) {
      double acc = 0.0;
      for (double x : s) acc += std::pow(std::abs(x - 1.0 / 3.0), beta);
      return amp * acc / d1;
    };
    return SmoothFunction(
        "kink", d1, d2, r, 1.0,
        [s_part](std::span<const double> s, std::span<const double> t) {
          double h = 1.0;
          for (double y : t) h *= std::cos(y + 0.3);
          return s_part(s) * h;
        },
        [s_part, t_integral](std::span<const double> s) { return s_part(s) * t_integral; });
  }

  if (id == "wave") {
    // integral over [0,1]^d2 of exp(i(S + 0.5 + sum t)) = exp(i(S + 0.5)) ((e^i - 1)/i)^d2
    const std::complex<double> unit_factor =
        std::pow((std::exp(std::complex<double>(0.0, 1.0)) - 1.0) / std::complex<double>(0.0, 1.0), d2);
    return SmoothFunction(
        "wave", d1, d2, r, 1.0,
        [](std::span<const double> s, std::span<const double> t) {
          double arg = 0.5;
          for (double x : s) arg += x;
          for (double y : t) arg += y;
          return std::sin(arg);
        },
        [unit_factor](std::span<const double> s) {
          double arg = 0.5;
          for (double x : s) arg += x;
          return (std::exp(std::complex<double>(0.0, arg)) * unit_factor).imag();
        });
  }

  if (id == "sinsin") {
    const int d = d1 + d2;
    const double scale = std::pow(2.0 * pi, -d);
    const double norm = std::max(1.0, std::pow(2.0 * pi, r - d));
    return SmoothFunction(
        "sinsin", d1, d2, r, norm,
        [scale](std::span<const double> s, std::span<const double> t) {
          double v = scale;
          for (double x : s) v *= std::sin(2.0 * pi * x);
          for (double y : t) v *= std::sin(2.0 * pi * y);
          return v;
        },
        [](auto) { return 0.0; });
  }

  throw std::invalid_argument("unknown test function '" + std::string(id) + "'");
}

std::vector<std::string> test_function_ids() { return {"const", "power", "kink", "lacunary", "wave", "sinsin"}; }

std::vector<SmoothFunction> smooth_corpus(int r, int d1, int d2) {
  return {make_test_function("lacunary", r, d1, d2), make_test_function("power", r, d1, d2),
          make_test_function("kink", r, d1, d2)};
}

}  // namespace parint
