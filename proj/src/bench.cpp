// SPDX-License-Identifier: Apache-2.0
#include "parint/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "parint/baselines.hpp"
#include "parint/function.hpp"
#include "parint/multilevel.hpp"
#include "parint/random.hpp"
#include "parint/schedule.hpp"

namespace parint {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::quantum: return "quantum";
    case Algorithm::det: return "det";
    case Algorithm::mc: return "mc";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "quantum") return Algorithm::quantum;
  if (name == "det") return Algorithm::det;
  if (name == "mc") return Algorithm::mc;
  throw std::invalid_argument("unknown algorithm: " + name);
}

void validate(const BenchConfig& c) {
  if (c.r < 1 || c.d1 < 1 || c.d2 < 1) throw std::invalid_argument("r, d1 and d2 must be positive");
  if (c.algorithms.empty()) throw std::invalid_argument("no algorithms selected");
  if (c.budgets.empty()) throw std::invalid_argument("no budgets given");
  for (std::size_t i = 1; i < c.budgets.size(); ++i)
    if (c.budgets[i] <= c.budgets[i - 1]) throw std::invalid_argument("budgets must be strictly increasing");
  if (c.trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (c.probe < 4) throw std::invalid_argument("probe factor must be at least 4");
}

namespace {

int deterministic_level(std::uint64_t n, int r, int d) {
  int level = -1;
  for (int k = 0; k < 40; ++k) {
    if (std::pow(static_cast<double>(r) * std::ldexp(1.0, k) + 1.0, d) > static_cast<double>(n)) break;
    level = k;
  }
  return level;
}

std::optional<int> output_level(Algorithm a, std::uint64_t n, const BenchConfig& c) {
  try {
    switch (a) {
      case Algorithm::quantum: return build_schedule(n, c.r, c.d1, c.d2).l;
      case Algorithm::mc: return build_mc_schedule(n, c.r, c.d1, c.d2).l;
      case Algorithm::det: {
        const int k = deterministic_level(n, c.r, c.d1 + c.d2);
        if (k < 0) return std::nullopt;
        return k;
      }
    }
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

auto order_key(const ExperimentRecord& e) { return std::make_tuple(to_string(e.algorithm), e.n, e.trial); }

void sort_records(std::vector<ExperimentRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) { return order_key(a) < order_key(b); });
}

}  // namespace

SweepResult run_sweep(const BenchConfig& c) {
  validate(c);
  const SmoothFunction f = make_test_function(c.function, c.r, c.d1, c.d2);

  int deepest = 0;
  for (auto a : c.algorithms)
    for (auto n : c.budgets)
      if (auto l = output_level(a, n, c)) deepest = std::max(deepest, *l);

  SweepResult out;
  out.probe_per_axis = probe_resolution(deepest, c.r, c.probe);
  const ReferenceTable reference(f, out.probe_per_axis, c.reference);

  auto row = [&](Algorithm a, std::uint64_t n, std::uint64_t t, std::uint64_t queries, double err) {
    out.records.push_back({a, c.r, c.d1, c.d2, n, queries, t, trial_seed(c.seed, t), err});
  };
  auto fail_all = [&](Algorithm a, std::uint64_t n, const std::string& msg) {
    for (std::uint64_t t = 0; t < c.trials; ++t) out.failures.push_back({a, n, t, msg});
  };

  for (auto a : c.algorithms) {
    for (auto n : c.budgets) {
      if (a == Algorithm::det) {
        try {
          const auto res = deterministic_baseline(f, n);
          const double err = reference.sup_error(res.approximation);
          for (std::uint64_t t = 0; t < c.trials; ++t) row(a, n, t, res.queries, err);
        } catch (const std::exception& e) {
          fail_all(a, n, e.what());
        }
        continue;
      }
      ParintOptions opts;
      if (a == Algorithm::mc) opts.mode = EstimatorMode::classical;
      std::optional<ParintPlan> plan;
      try {
        plan.emplace(ParintPlan::prepare(f, n, opts));
      } catch (const std::exception& e) {
        fail_all(a, n, e.what());
        continue;
      }
      for (std::uint64_t t = 0; t < c.trials; ++t) {
        try {
          const auto res = plan->sample(trial_seed(c.seed, t));
          row(a, n, t, res.ledger.total(), reference.sup_error(res.approximation));
        } catch (const std::exception& e) {
          out.failures.push_back({a, n, t, e.what()});
        }
      }
    }
  }
  sort_records(out.records);
  return out;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<BudgetSummary> summarize(const std::vector<ExperimentRecord>& records) {
  std::map<std::tuple<std::string, std::uint64_t>, std::pair<std::vector<double>, std::vector<double>>> groups;
  std::map<std::string, Algorithm> algs;
  for (const auto& e : records) {
    auto& g = groups[{to_string(e.algorithm), e.n}];
    g.first.push_back(e.sup_error);
    g.second.push_back(static_cast<double>(e.queries));
    algs[to_string(e.algorithm)] = e.algorithm;
  }
  std::vector<BudgetSummary> out;
  for (const auto& [key, g] : groups) {
    BudgetSummary s;
    s.algorithm = algs[std::get<0>(key)];
    s.n = std::get<1>(key);
    s.queries = quantile(g.second, 0.5);
    s.median = quantile(g.first, 0.5);
    s.q75 = quantile(g.first, 0.75);
    s.trials = g.first.size();
    out.push_back(s);
  }
  return out;
}

std::vector<ExperimentRecord> select(const std::vector<ExperimentRecord>& records, Algorithm a) {
  std::vector<ExperimentRecord> out;
  for (const auto& e : records)
    if (e.algorithm == a) out.push_back(e);
  return out;
}

SlopeFit fit_slope(const std::vector<ExperimentRecord>& records) {
  if (!records.empty()) {
    for (const auto& e : records)
      if (e.algorithm != records.front().algorithm)
        throw std::invalid_argument("slope fit needs records of a single algorithm");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& s : summarize(records)) {
    if (!(s.median > 0.0) || !(s.queries > 0.0)) continue;
    xs.push_back(std::log2(s.queries));
    ys.push_back(std::log2(s.median));
  }
  const std::size_t n = xs.size();
  if (n < 4) throw std::invalid_argument("slope fit needs at least 4 budgets with positive error");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("slope fit needs distinct query counts");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - fit.intercept - fit.slope * xs[i];
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  fit.slope_stderr = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
  fit.points = n;
  return fit;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

constexpr const char* kCsvHeader = "algorithm,r,d1,d2,n,queries,trial,seed,sup_error";

template <class T>
T parse_number(const std::string& s, const char* what) {
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument(std::string("bad value for ") + what + ": '" + s + "'");
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_csv(const std::vector<ExperimentRecord>& records, std::ostream& os) {
  auto sorted = records;
  sort_records(sorted);
  os << kCsvHeader << '\n';
  for (const auto& e : sorted) {
    os << to_string(e.algorithm) << ',' << e.r << ',' << e.d1 << ',' << e.d2 << ',' << e.n << ',' << e.queries << ','
       << e.trial << ',' << e.seed << ',' << format_double(e.sup_error) << '\n';
  }
}

std::vector<ExperimentRecord> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != kCsvHeader) throw std::invalid_argument("missing or wrong CSV header");
  std::vector<ExperimentRecord> out;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw std::invalid_argument("CSV row with wrong field count: " + line);
    ExperimentRecord e;
    e.algorithm = parse_algorithm(f[0]);
    e.r = parse_number<int>(f[1], "r");
    e.d1 = parse_number<int>(f[2], "d1");
    e.d2 = parse_number<int>(f[3], "d2");
    e.n = parse_number<std::uint64_t>(f[4], "n");
    e.queries = parse_number<std::uint64_t>(f[5], "queries");
    e.trial = parse_number<std::uint64_t>(f[6], "trial");
    e.seed = parse_number<std::uint64_t>(f[7], "seed");
    e.sup_error = parse_number<double>(f[8], "sup_error");
    out.push_back(e);
  }
  return out;
}

void write_plot_data(const std::vector<ExperimentRecord>& records, std::ostream& os) {
  os << "algorithm,log2_queries,log2_median_error,log2_q75_error\n";
  for (const auto& s : summarize(records)) {
    os << to_string(s.algorithm) << ',' << format_double(std::log2(s.queries)) << ','
       << format_double(std::log2(s.median)) << ',' << format_double(std::log2(s.q75)) << '\n';
  }
}

void emit(const std::vector<ExperimentRecord>& records, EmitFormat format, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("no records to write");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  if (format == EmitFormat::csv)
    write_csv(records, os);
  else
    write_plot_data(records, os);
  os.flush();
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_config(const std::map<std::string, std::string>& kv, BenchConfig& c) {
  for (const auto& [key, value] : kv) {
    if (key == "r") {
      c.r = parse_number<int>(value, "r");
    } else if (key == "d1") {
      c.d1 = parse_number<int>(value, "d1");
    } else if (key == "d2") {
      c.d2 = parse_number<int>(value, "d2");
    } else if (key == "algos") {
      c.algorithms.clear();
      for (const auto& a : split(value, ',')) c.algorithms.push_back(parse_algorithm(trim(a)));
    } else if (key == "n-list") {
      c.budgets.clear();
      for (const auto& n : split(value, ',')) c.budgets.push_back(parse_number<std::uint64_t>(trim(n), "n-list"));
    } else if (key == "trials") {
      c.trials = parse_number<std::uint64_t>(value, "trials");
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(value, "seed");
    } else if (key == "function") {
      c.function = value;
    } else if (key == "probe") {
      c.probe = parse_number<int>(value, "probe");
    } else if (key == "out") {
      c.out = value;
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
}

}  // namespace parint
