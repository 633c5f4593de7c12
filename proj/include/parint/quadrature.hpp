// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace parint {

/// A one-dimensional rule on [0,1].
struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite Gauss-Legendre rule on [0,1] with `panels` equal panels and
/// `points` nodes per panel. Supported point counts: 4, 8, 10, 16, 20.
[[nodiscard]] AxisRule composite_gauss_legendre(int panels, int points);

/// Tensor-product application of an axis rule over [0,1]^d.
[[nodiscard]] double integrate_unit_cube(int d, const AxisRule& rule,
                                         const std::function<double(std::span<const double>)>& g);

}  // namespace parint
