// SPDX-License-Identifier: Apache-2.0
#include "parint/constants.hpp"

#include <array>
#include <cmath>

#include "parint/grid.hpp"

namespace parint {

namespace {

// Generated by tools/calibrate.
constexpr std::array<CalibratedConstants, 7> kTable{{
    {1, 1, 1, 2, 0.0890927},  // a priori detail 4
    {2, 1, 1, 2, 0.00459284},  // a priori detail 3.375
    {3, 1, 1, 2.375, 9.49322e-05},  // a priori detail 3.06965
    {1, 2, 1, 2, 0},  // a priori detail 6
    {2, 2, 1, 2.03125, 0.00459284},  // a priori detail 7.6875
    {1, 1, 2, 2, 0.199828},  // a priori detail 4
    {2, 1, 2, 1, 0.00508858},  // a priori detail 3.375
}};

}  // namespace

std::optional<CalibratedConstants> calibrated_constants(int r, int d1, int d2) {
  for (const auto& c : kTable)
    if (c.r == r && c.d1 == d1 && c.d2 == d2) return c;
  return std::nullopt;
}

double a_priori_detail_constant(int r, int d1) {
  return std::ldexp(interpolation_remainder_constant(r, d1), r) + 1.0 +
         std::pow(lebesgue_constant(r), d1);
}

double detail_constant(int r, int d1, int d2) {
  if (auto c = calibrated_constants(r, d1, d2)) return c->detail;
  return a_priori_detail_constant(r, d1);
}

double integration_constant(int r, int d1, int d2) {
  if (auto c = calibrated_constants(r, d1, d2)) return c->integration;
  return interpolation_remainder_constant(r, d2);
}

}  // namespace parint
