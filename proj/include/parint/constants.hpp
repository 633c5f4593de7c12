// SPDX-License-Identifier: Apache-2.0
//
// Scaling constants of the multilevel algorithm. The calibrated values are
// twice the largest ratio observed on the smooth test corpus; they are
// produced by tools/calibrate and frozen in constants.cpp. Configurations
// outside the table fall back to the a priori bounds.
#pragma once

#include <optional>

namespace parint {

struct CalibratedConstants {
  int r;
  int d1;
  int d2;
  /// c_1: sup_j |(Gamma_{k,s} f)(j)| <= c_1 2^{-rk} on fine levels.
  double detail;
  /// Start-level residual constant: sup |g - P g| <= c * 2^{-rk} for g = f(s, .).
  double integration;
};

[[nodiscard]] std::optional<CalibratedConstants> calibrated_constants(int r, int d1, int d2);

/// 2^r C(r, d1) + 1 + Lambda_r^{d1}, with C from interpolation_remainder_constant:
/// interpolation remainder at level k-1 plus the codec error of the
/// weighted subtraction.
[[nodiscard]] double a_priori_detail_constant(int r, int d1);

[[nodiscard]] double detail_constant(int r, int d1, int d2);
[[nodiscard]] double integration_constant(int r, int d1, int d2);

}  // namespace parint
