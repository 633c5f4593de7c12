// SPDX-License-Identifier: Apache-2.0
//
// parint: sweeps, slope fits, single runs, schedules and fooling manifests.
//
// Exit codes: 0 success, 2 some sweep rows failed, 1 any other error.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "parint/bench.hpp"
#include "parint/fooling.hpp"
#include "parint/function.hpp"
#include "parint/io.hpp"
#include "parint/multilevel.hpp"
#include "parint/schedule.hpp"

namespace {

struct SweepFlags {
  std::string r, d1, d2, algos, n_list, trials, seed, function, probe, out, config, plot;
};

void add_bench_flags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--r", f.r, "smoothness order");
  cmd->add_option("--d1", f.d1, "parameter dimension");
  cmd->add_option("--d2", f.d2, "integration dimension");
  cmd->add_option("--algos", f.algos, "comma list of quantum,det,mc");
  cmd->add_option("--n-list", f.n_list, "comma list of strictly increasing budgets");
  cmd->add_option("--trials", f.trials, "trials per budget");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--function", f.function, "test function id");
  cmd->add_option("--probe", f.probe, "probe points per output mesh interval (>= 4)");
  cmd->add_option("--out", f.out, "CSV output path (stdout when omitted)");
  cmd->add_option("--config", f.config, "key=value config file; flags win");
}

parint::BenchConfig resolve(const SweepFlags& f) {
  std::map<std::string, std::string> kv;
  if (!f.config.empty()) kv = parint::read_config_file(f.config);
  const std::pair<const char*, const std::string*> flags[] = {
      {"r", &f.r},         {"d1", &f.d1},     {"d2", &f.d2},       {"algos", &f.algos},
      {"n-list", &f.n_list}, {"trials", &f.trials}, {"seed", &f.seed}, {"function", &f.function},
      {"probe", &f.probe}, {"out", &f.out}};
  for (const auto& [key, value] : flags)
    if (!value->empty()) kv[key] = *value;
  parint::BenchConfig config;
  parint::apply_config(kv, config);
  parint::validate(config);
  return config;
}

int run_sweep_cmd(const SweepFlags& f) {
  const auto config = resolve(f);
  const auto result = parint::run_sweep(config);
  for (const auto& fail : result.failures)
    std::cerr << "row failed: " << parint::to_string(fail.algorithm) << " n=" << fail.n << " trial=" << fail.trial
              << ": " << fail.message << '\n';
  if (result.records.empty()) {
    std::cerr << "no successful rows\n";
    return 1;
  }
  if (config.out.empty())
    parint::write_csv(result.records, std::cout);
  else
    parint::emit(result.records, parint::EmitFormat::csv, config.out);
  if (!f.plot.empty()) parint::emit(result.records, parint::EmitFormat::plot, f.plot);
  return result.failures.empty() ? 0 : 2;
}

int run_fit_cmd(const std::string& in, bool json_out) {
  std::ifstream is(in);
  if (!is) throw std::runtime_error("cannot open " + in);
  const auto records = parint::parse_csv(is);
  nlohmann::json out = nlohmann::json::array();
  for (auto a : {parint::Algorithm::det, parint::Algorithm::mc, parint::Algorithm::quantum}) {
    const auto sel = parint::select(records, a);
    if (sel.empty()) continue;
    nlohmann::json row{{"algorithm", parint::to_string(a)}};
    try {
      const auto fit = parint::fit_slope(sel);
      row["slope"] = fit.slope;
      row["intercept"] = fit.intercept;
      row["residual"] = fit.residual;
      row["slope_stderr"] = fit.slope_stderr;
      row["points"] = fit.points;
    } catch (const std::invalid_argument& e) {
      row["error"] = e.what();
    }
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& s : parint::summarize(sel))
      summary.push_back({{"n", s.n}, {"queries", s.queries}, {"median", s.median}, {"q75", s.q75}});
    row["summary"] = summary;
    out.push_back(row);
  }
  if (json_out) {
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  for (const auto& row : out) {
    std::cout << row["algorithm"].get<std::string>() << ": ";
    if (row.contains("slope"))
      std::cout << "slope " << row["slope"].get<double>() << " +- " << row["slope_stderr"].get<double>()
                << " residual " << row["residual"].get<double>() << " points " << row["points"] << '\n';
    else
      std::cout << row["error"].get<std::string>() << '\n';
    for (const auto& s : row["summary"])
      std::cout << "  n=" << s["n"] << " queries=" << s["queries"] << " median=" << s["median"]
                << " q75=" << s["q75"] << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilevel parametric integration harness"};
  app.require_subcommand(1);

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "run algorithms over budgets and trials, write CSV");
  add_bench_flags(sweep, sweep_flags);
  sweep->add_option("--plot", sweep_flags.plot, "also write plot data to this path");

  std::string fit_in;
  bool fit_json = false;
  auto* fit = app.add_subcommand("fit", "fit log-log slopes to a sweep CSV");
  fit->add_option("--in", fit_in, "sweep CSV")->required();
  fit->add_flag("--json", fit_json, "print JSON");

  int c_m = 4, c_r = 2, c_d1 = 1, c_d2 = 1;
  std::uint64_t c_random = 8, c_seed = 1;
  std::string c_out;
  auto* corpus = app.add_subcommand("corpus", "write a fooling-function manifest");
  corpus->add_option("--m", c_m, "cells per axis (even)");
  corpus->add_option("--r", c_r, "smoothness order");
  corpus->add_option("--d1", c_d1, "parameter dimension");
  corpus->add_option("--d2", c_d2, "integration dimension");
  corpus->add_option("--random", c_random, "number of random instances");
  corpus->add_option("--seed", c_seed, "seed for random instances");
  corpus->add_option("--out", c_out, "manifest path (stdout when omitted)");

  int x_r = 2, x_d1 = 1, x_d2 = 1;
  std::uint64_t x_n = 1024, x_seed = 1;
  std::string x_algo = "quantum", x_function = "power", x_out;
  auto* run = app.add_subcommand("run", "one run, JSON output");
  run->add_option("--r", x_r, "smoothness order");
  run->add_option("--d1", x_d1, "parameter dimension");
  run->add_option("--d2", x_d2, "integration dimension");
  run->add_option("--n", x_n, "budget");
  run->add_option("--seed", x_seed, "seed");
  run->add_option("--algo", x_algo, "quantum or mc");
  run->add_option("--function", x_function, "test function id");
  run->add_option("--out", x_out, "JSON path (stdout when omitted)");

  bool s_mc = false;
  auto* sched = app.add_subcommand("schedule", "print the level schedule as JSON");
  sched->add_option("--n", x_n, "budget");
  sched->add_option("--r", x_r, "smoothness order");
  sched->add_option("--d1", x_d1, "parameter dimension");
  sched->add_option("--d2", x_d2, "integration dimension");
  sched->add_flag("--mc", s_mc, "classical schedule");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*sweep) return run_sweep_cmd(sweep_flags);
    if (*fit) return run_fit_cmd(fit_in, fit_json);
    if (*corpus) {
      const auto family = parint::BumpFamily::make(c_m, c_r, c_d1, c_d2);
      const auto manifest = parint::corpus_manifest(family, parint::fooling_corpus(family, c_random, c_seed));
      if (c_out.empty()) {
        std::cout << manifest.dump(2) << '\n';
      } else {
        std::ofstream os(c_out);
        if (!os) throw std::runtime_error("cannot open " + c_out);
        os << manifest.dump(2) << '\n';
      }
      return 0;
    }
    if (*run) {
      const auto f = parint::make_test_function(x_function, x_r, x_d1, x_d2);
      parint::ParintOptions opts;
      const auto alg = parint::parse_algorithm(x_algo);
      if (alg == parint::Algorithm::det) throw std::invalid_argument("run supports quantum and mc");
      if (alg == parint::Algorithm::mc) opts.mode = parint::EstimatorMode::classical;
      const auto result = parint::run_parint(f, x_n, x_seed, opts);
      auto j = parint::to_json(result);
      j["sup_error"] = parint::measure_sup_error(result, f);
      if (x_out.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::ofstream os(x_out);
        if (!os) throw std::runtime_error("cannot open " + x_out);
        os << j.dump(2) << '\n';
      }
      return 0;
    }
    if (*sched) {
      const auto s = s_mc ? parint::build_mc_schedule(x_n, x_r, x_d1, x_d2) : parint::build_schedule(x_n, x_r, x_d1, x_d2);
      std::cout << parint::to_json(s).dump(2) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
