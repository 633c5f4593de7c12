// SPDX-License-Identifier: Apache-2.0
#include "parint/fooling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "parint/grid.hpp"

namespace parint {

double eta(double x) noexcept {
  if (!(x > 0.0 && x < 1.0)) return 0.0;
  return std::exp(-1.0 / (x * (1.0 - x)));
}

std::vector<double> eta_jet(double x, int order) {
  if (order < 0) throw std::invalid_argument("derivative order must be non-negative");
  const auto len = static_cast<std::size_t>(order) + 1;
  std::vector<double> out(len, 0.0);
  if (!(x > 0.0 && x < 1.0)) return out;
  const double h0 = x * (1.0 - x);
  const double e0 = std::exp(-1.0 / h0);
  if (e0 == 0.0) return out;

  // Taylor coefficients of h = x(1-x), g = -1/h and exp(g) about x.
  std::vector<double> h(len, 0.0);
  h[0] = h0;
  if (len > 1) h[1] = 1.0 - 2.0 * x;
  if (len > 2) h[2] = -1.0;
  std::vector<double> q(len, 0.0);
  q[0] = 1.0 / h0;
  for (std::size_t n = 1; n < len; ++n) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= std::min<std::size_t>(n, 2); ++j) acc += h[j] * q[n - j];
    q[n] = -acc / h0;
  }
  std::vector<double> e(len, 0.0);
  e[0] = e0;
  for (std::size_t n = 1; n < len; ++n) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) acc += static_cast<double>(j) * (-q[j]) * e[n - j];
    e[n] = acc / static_cast<double>(n);
  }
  double fact = 1.0;
  for (std::size_t n = 0; n < len; ++n) {
    if (n > 0) fact *= static_cast<double>(n);
    out[n] = fact * e[n];
  }
  return out;
}

double sigma0() {
  static const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double x) { return eta(x); }, 0.0, 1.0, 20, 1e-15);
  return value;
}

std::vector<double> eta_derivative_sups(int order) {
  static std::mutex mutex;
  static std::map<int, std::vector<double>> cache;
  const std::lock_guard lock(mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;

  constexpr int grid = 200000;
  const auto len = static_cast<std::size_t>(order) + 1;
  std::vector<double> sups(len, 0.0);
  std::vector<double> best_x(len, 0.5);
  for (int i = 1; i < grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const auto jet = eta_jet(x, order);
    for (std::size_t j = 0; j < len; ++j) {
      if (std::abs(jet[j]) > sups[j]) {
        sups[j] = std::abs(jet[j]);
        best_x[j] = x;
      }
    }
  }
  // Golden-section refinement around each grid maximum.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t j = 0; j < len; ++j) {
    auto value = [&](double x) { return std::abs(eta_jet(x, order)[j]); };
    double a = best_x[j] - 1.0 / grid;
    double b = best_x[j] + 1.0 / grid;
    for (int it = 0; it < 60; ++it) {
      const double c = b - phi * (b - a);
      const double d = a + phi * (b - a);
      if (value(c) > value(d)) b = d;
      else a = c;
    }
    sups[j] = std::max(sups[j], value(0.5 * (a + b)));
  }
  cache.emplace(order, sups);
  return sups;
}

double norm_gamma(int r, int d) {
  if (r < 0 || d < 1) throw std::invalid_argument("invalid order or dimension");
  const auto sups = eta_derivative_sups(r);
  double best = 0.0;
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  while (true) {
    const int total = std::accumulate(k.begin(), k.end(), 0);
    if (total <= r) {
      double p = 1.0;
      for (int kl : k) p *= sups[static_cast<std::size_t>(kl)];
      best = std::max(best, p);
    }
    std::size_t a = k.size();
    while (true) {
      if (a == 0) return best;
      --a;
      if (++k[a] <= r) break;
      k[a] = 0;
    }
  }
}

BumpFamily BumpFamily::make(int m, int r, int d1, int d2) {
  if (m < 2 || m % 2 != 0) throw std::invalid_argument("subdivision count must be even and positive");
  if (r < 1 || d1 < 1 || d2 < 1) throw std::invalid_argument("invalid bump family parameters");
  const double cells = std::pow(static_cast<double>(m), d1 + d2);
  if (cells > static_cast<double>(std::uint64_t{1} << 24)) throw std::invalid_argument("too many cells");
  BumpFamily fam;
  fam.m = m;
  fam.r = r;
  fam.d1 = d1;
  fam.d2 = d2;
  fam.cells = static_cast<std::uint64_t>(cells);
  fam.norm_gamma = parint::norm_gamma(r, d1 + d2);
  fam.sigma0 = parint::sigma0();
  return fam;
}

double BumpFamily::scale() const noexcept { return 1.0 / (norm_gamma * std::pow(static_cast<double>(m), r)); }

std::vector<std::uint64_t> BumpFamily::cell_coords(std::uint64_t i) const {
  if (i >= cells) throw std::out_of_range("cell index out of range");
  const auto d = static_cast<std::size_t>(d1 + d2);
  std::vector<std::uint64_t> j(d);
  for (std::size_t a = d; a-- > 0;) {
    j[a] = i % static_cast<std::uint64_t>(m);
    i /= static_cast<std::uint64_t>(m);
  }
  return j;
}

namespace {

double axis_bumps(int m, std::span<const std::uint64_t> j, std::span<const double> x) {
  double v = 1.0;
  for (std::size_t a = 0; a < x.size() && v != 0.0; ++a) v *= eta(m * x[a] - static_cast<double>(j[a]));
  return v;
}

std::uint64_t cell_of(int m, double x) {
  const auto c = static_cast<std::int64_t>(std::floor(m * x));
  return static_cast<std::uint64_t>(std::clamp<std::int64_t>(c, 0, m - 1));
}

}  // namespace

double bump_function(const BumpFamily& family, std::uint64_t i, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(family.d1 + family.d2)) throw std::invalid_argument("point dimension mismatch");
  const auto j = family.cell_coords(i);
  return axis_bumps(family.m, j, x);
}

double bump_parameter_factor(const BumpFamily& family, std::uint64_t i, std::span<const double> s) {
  if (s.size() != static_cast<std::size_t>(family.d1)) throw std::invalid_argument("parameter dimension mismatch");
  const auto j = family.cell_coords(i);
  return axis_bumps(family.m, std::span(j).first(s.size()), s);
}

SmoothFunction fooling_instance(const BumpFamily& family, const std::vector<bool>& u) {
  if (u.size() != family.cells) throw std::invalid_argument("bit vector length must equal the cell count");
  const BumpFamily fam = family;
  const double scale = fam.scale();
  const double t_factor = std::pow(fam.sigma0 / fam.m, fam.d2);
  const auto m = static_cast<std::uint64_t>(fam.m);
  std::uint64_t t_cells = 1;
  for (int a = 0; a < fam.d2; ++a) t_cells *= m;

  auto eval = [fam, u, scale, m](std::span<const double> s, std::span<const double> t) {
    std::uint64_t i = 0;
    double v = 1.0;
    for (double x : s) {
      const auto c = cell_of(fam.m, x);
      i = i * m + c;
      v *= eta(fam.m * x - static_cast<double>(c));
    }
    for (double x : t) {
      const auto c = cell_of(fam.m, x);
      i = i * m + c;
      v *= eta(fam.m * x - static_cast<double>(c));
    }
    return u[i] ? scale * v : 0.0;
  };
  auto solution = [fam, u, scale, t_factor, m, t_cells](std::span<const double> s) {
    std::uint64_t base = 0;
    double v = 1.0;
    for (double x : s) {
      const auto c = cell_of(fam.m, x);
      base = base * m + c;
      v *= eta(fam.m * x - static_cast<double>(c));
    }
    if (v == 0.0) return 0.0;
    std::uint64_t count = 0;
    for (std::uint64_t tc = 0; tc < t_cells; ++tc) count += u[base * t_cells + tc] ? 1 : 0;
    return static_cast<double>(count) * scale * t_factor * v;
  };
  return SmoothFunction("fooling", fam.d1, fam.d2, fam.r, 1.0, eval, solution);
}

double single_bump_solution_norm(const BumpFamily& family) {
  return std::exp(-4.0 * family.d1) * std::pow(family.sigma0, family.d2) /
         (family.norm_gamma * std::pow(static_cast<double>(family.m), family.r + family.d2));
}

double rho(std::uint64_t cells, std::uint64_t l, std::uint64_t l_prime) {
  if (l > cells || l_prime > cells || l == l_prime) throw std::invalid_argument("rho needs 0 <= l != l' <= L");
  const double L = static_cast<double>(cells);
  const double gap = std::abs(static_cast<double>(l) - static_cast<double>(l_prime));
  auto root = [L](std::uint64_t j) {
    const double jj = static_cast<double>(j);
    return std::sqrt(jj * (L - jj));
  };
  return std::sqrt(L / gap) + std::min(root(l), root(l_prime)) / gap;
}

std::string bits_to_hex(const std::vector<bool>& u) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve((u.size() + 3) / 4);
  for (std::size_t i = 0; i < u.size(); i += 4) {
    int nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) nibble = (nibble << 1) | ((i + b < u.size() && u[i + b]) ? 1 : 0);
    out.push_back(digits[nibble]);
  }
  return out;
}

std::vector<bool> hex_to_bits(const std::string& hex, std::uint64_t length) {
  if (hex.size() != (length + 3) / 4) throw std::invalid_argument("hex length does not match bit count");
  std::vector<bool> u(length, false);
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = hex[i];
    int nibble;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
    else throw std::invalid_argument("invalid hex digit");
    for (std::size_t b = 0; b < 4; ++b) {
      const bool bit = ((nibble >> (3 - b)) & 1) != 0;
      const std::size_t pos = 4 * i + b;
      if (pos < length) u[pos] = bit;
      else if (bit) throw std::invalid_argument("nonzero padding bits");
    }
  }
  return u;
}

std::vector<std::vector<bool>> fooling_corpus(const BumpFamily& family, std::uint64_t random_count, std::uint64_t seed) {
  const std::uint64_t L = family.cells;
  std::vector<std::vector<bool>> corpus;
  corpus.emplace_back(L, false);
  std::vector<bool> e0(L, false);
  e0[0] = true;
  corpus.push_back(e0);
  std::vector<bool> lower(L, false);
  for (std::uint64_t i = 1; i < L / 2; ++i) lower[i] = true;
  std::vector<bool> upper = lower;
  upper[0] = true;
  corpus.push_back(lower);
  corpus.push_back(upper);
  SplitMix64 gen(mix64(seed));
  for (std::uint64_t c = 0; c < random_count; ++c) {
    std::vector<bool> u(L);
    for (std::uint64_t i = 0; i < L; ++i) u[i] = (gen() >> 63) != 0;
    corpus.push_back(std::move(u));
  }
  return corpus;
}

nlohmann::json corpus_manifest(const BumpFamily& family, const std::vector<std::vector<bool>>& corpus) {
  nlohmann::json fam = {{"m", family.m},
                        {"r", family.r},
                        {"d1", family.d1},
                        {"d2", family.d2},
                        {"cells", family.cells},
                        {"norm_gamma", family.norm_gamma},
                        {"sigma0", family.sigma0}};
  nlohmann::json instances = nlohmann::json::array();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto weight = std::count(corpus[i].begin(), corpus[i].end(), true);
    instances.push_back({{"id", i}, {"weight", weight}, {"u", bits_to_hex(corpus[i])}});
  }
  return {{"family", fam}, {"instances", instances}};
}

double sampled_cr_norm(const SmoothFunction& f, int r, std::uint64_t samples, std::uint64_t seed, double h) {
  const auto d1 = static_cast<std::size_t>(f.d1());
  const auto d = d1 + static_cast<std::size_t>(f.d2());
  if (r < 0 || samples == 0 || !(h > 0.0)) throw std::invalid_argument("invalid norm proxy parameters");
  const double margin = 0.5 * r * h;

  // Multi-indices with |k| <= r.
  std::vector<std::vector<int>> orders;
  std::vector<int> k(d, 0);
  while (true) {
    if (std::accumulate(k.begin(), k.end(), 0) <= r) orders.push_back(k);
    std::size_t a = d;
    bool done = false;
    while (true) {
      if (a == 0) {
        done = true;
        break;
      }
      --a;
      if (++k[a] <= r) break;
      k[a] = 0;
    }
    if (done) break;
  }

  auto binom = [](int n, int i) {
    double c = 1.0;
    for (int j = 1; j <= i; ++j) c = c * (n - i + j) / j;
    return c;
  };

  SplitMix64 gen(mix64(seed ^ 0xC0FFEEULL));
  std::vector<double> x(d);
  std::vector<double> y(d);
  double best = 0.0;
  for (std::uint64_t n = 0; n < samples; ++n) {
    for (auto& xi : x) xi = margin + (1.0 - 2.0 * margin) * uniform01(gen);
    for (const auto& ord : orders) {
      // Tensor central difference: sum over offsets i_a in [0, k_a].
      std::vector<int> idx(d, 0);
      double acc = 0.0;
      while (true) {
        double w = 1.0;
        for (std::size_t a = 0; a < d; ++a) {
          w *= binom(ord[a], idx[a]) * ((idx[a] % 2) ? -1.0 : 1.0);
          y[a] = x[a] + (0.5 * ord[a] - idx[a]) * h;
        }
        acc += w * f(std::span<const double>(y).first(d1), std::span<const double>(y).subspan(d1));
        std::size_t a = d;
        bool done = false;
        while (true) {
          if (a == 0) {
            done = true;
            break;
          }
          --a;
          if (++idx[a] <= ord[a]) break;
          idx[a] = 0;
        }
        if (done) break;
      }
      const int total = std::accumulate(ord.begin(), ord.end(), 0);
      best = std::max(best, std::abs(acc) / std::pow(h, total));
    }
  }
  return best;
}

}  // namespace parint
