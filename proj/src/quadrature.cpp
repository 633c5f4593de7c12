// SPDX-License-Identifier: Apache-2.0
#include "parint/quadrature.hpp"

#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace parint {

namespace {

template <int N>
void reference_rule(std::vector<double>& x, std::vector<double>& w) {
  // Boost stores the non-negative half of the symmetric rule on [-1,1].
  using rule = boost::math::quadrature::gauss<double, N>;
  const auto& a = rule::abscissa();
  const auto& b = rule::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      x.push_back(0.0);
      w.push_back(b[i]);
      continue;
    }
    x.push_back(-a[i]);
    w.push_back(b[i]);
    x.push_back(a[i]);
    w.push_back(b[i]);
  }
}

}  // namespace

AxisRule composite_gauss_legendre(int panels, int points) {
  if (panels < 1) throw std::invalid_argument("panel count must be positive");
  std::vector<double> x;
  std::vector<double> w;
  switch (points) {
    case 4: reference_rule<4>(x, w); break;
    case 8: reference_rule<8>(x, w); break;
    case 10: reference_rule<10>(x, w); break;
    case 16: reference_rule<16>(x, w); break;
    case 20: reference_rule<20>(x, w); break;
    default: throw std::invalid_argument("unsupported Gauss-Legendre order");
  }
  AxisRule out;
  const double h = 1.0 / panels;
  out.nodes.reserve(static_cast<std::size_t>(panels) * x.size());
  out.weights.reserve(out.nodes.capacity());
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.nodes.push_back(h * (p + 0.5 * (x[i] + 1.0)));
      out.weights.push_back(0.5 * h * w[i]);
    }
  }
  return out;
}

double integrate_unit_cube(int d, const AxisRule& rule,
                           const std::function<double(std::span<const double>)>& g) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  const std::size_t q = rule.nodes.size();
  if (q == 0 || rule.weights.size() != q) throw std::invalid_argument("malformed axis rule");
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> pt(static_cast<std::size_t>(d), rule.nodes[0]);
  double acc = 0.0;
  while (true) {
    double w = 1.0;
    for (auto i : idx) w *= rule.weights[i];
    acc += w * g(pt);
    std::size_t a = idx.size();
    while (true) {
      if (a == 0) return acc;
      --a;
      if (++idx[a] < q) {
        pt[a] = rule.nodes[idx[a]];
        break;
      }
      idx[a] = 0;
      pt[a] = rule.nodes[0];
    }
  }
}

}  // namespace parint
