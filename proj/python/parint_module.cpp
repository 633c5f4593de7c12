// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parint/baselines.hpp"
#include "parint/bench.hpp"
#include "parint/fooling.hpp"
#include "parint/io.hpp"
#include "parint/multilevel.hpp"

namespace py = pybind11;
using namespace parint;

namespace {

py::dict record_dict(const ExperimentRecord& e) {
  py::dict d;
  d["algorithm"] = to_string(e.algorithm);
  d["r"] = e.r;
  d["d1"] = e.d1;
  d["d2"] = e.d2;
  d["n"] = e.n;
  d["queries"] = e.queries;
  d["trial"] = e.trial;
  d["seed"] = e.seed;
  d["sup_error"] = e.sup_error;
  return d;
}

ExperimentRecord record_from(const py::dict& d) {
  ExperimentRecord e;
  e.algorithm = parse_algorithm(d["algorithm"].cast<std::string>());
  e.r = d["r"].cast<int>();
  e.d1 = d["d1"].cast<int>();
  e.d2 = d["d2"].cast<int>();
  e.n = d["n"].cast<std::uint64_t>();
  e.queries = d["queries"].cast<std::uint64_t>();
  e.trial = d["trial"].cast<std::uint64_t>();
  e.seed = d["seed"].cast<std::uint64_t>();
  e.sup_error = d["sup_error"].cast<double>();
  return e;
}

}  // namespace

PYBIND11_MODULE(_parint, m) {
  m.doc() = "Multilevel parametric integration core";
  py::register_exception<NormBoundViolation>(m, "NormBoundViolation", PyExc_RuntimeError);

  m.def("test_functions", &test_function_ids);
  m.def("qae_error_bound", &qae_error_bound, py::arg("n"), py::arg("a"));
  m.def("rho", &rho, py::arg("cells"), py::arg("l"), py::arg("l_prime"));

  m.def("schedule_json", [](std::uint64_t n, int r, int d1, int d2, bool mc) {
    return to_json(mc ? build_mc_schedule(n, r, d1, d2) : build_schedule(n, r, d1, d2)).dump();
  });

  m.def("run_json", [](const std::string& function, std::uint64_t n, std::uint64_t seed, int r, int d1, int d2,
                       const std::string& algorithm) {
    const auto f = make_test_function(function, r, d1, d2);
    ParintOptions opts;
    const auto alg = parse_algorithm(algorithm);
    if (alg == Algorithm::det) throw std::invalid_argument("use deterministic() for the det baseline");
    if (alg == Algorithm::mc) opts.mode = EstimatorMode::classical;
    py::gil_scoped_release release;
    const auto result = run_parint(f, n, seed, opts);
    auto j = to_json(result);
    j["sup_error"] = measure_sup_error(result, f);
    return j.dump();
  });

  m.def("deterministic_json", [](const std::string& function, std::uint64_t n, int r, int d1, int d2) {
    const auto f = make_test_function(function, r, d1, d2);
    py::gil_scoped_release release;
    const auto det = deterministic_baseline(f, n);
    const auto& spec = det.approximation.spec();
    const ReferenceTable table(f, probe_resolution(spec.k, spec.r, 4));
    nlohmann::json j{{"queries", det.queries},
                     {"sup_error", table.sup_error(det.approximation)},
                     {"approximation", to_json(det.approximation)}};
    return j.dump();
  });

  m.def("sweep", [](std::vector<std::uint64_t> budgets, std::vector<std::string> algos, int r, int d1, int d2,
                    std::uint64_t trials, std::uint64_t seed, std::string function) {
    BenchConfig cfg;
    cfg.r = r;
    cfg.d1 = d1;
    cfg.d2 = d2;
    cfg.algorithms.clear();
    for (const auto& a : algos) cfg.algorithms.push_back(parse_algorithm(a));
    cfg.budgets = std::move(budgets);
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.function = std::move(function);
    validate(cfg);
    SweepResult res;
    {
      py::gil_scoped_release release;
      res = run_sweep(cfg);
    }
    py::list records, failures;
    for (const auto& e : res.records) records.append(record_dict(e));
    for (const auto& f : res.failures) {
      py::dict d;
      d["algorithm"] = to_string(f.algorithm);
      d["n"] = f.n;
      d["trial"] = f.trial;
      d["message"] = f.message;
      failures.append(d);
    }
    return py::make_tuple(records, failures);
  });

  m.def("fit_slope", [](const py::list& records) {
    std::vector<ExperimentRecord> recs;
    for (const auto& item : records) recs.push_back(record_from(item.cast<py::dict>()));
    const auto fit = parint::fit_slope(recs);
    py::dict d;
    d["slope"] = fit.slope;
    d["intercept"] = fit.intercept;
    d["residual"] = fit.residual;
    d["slope_stderr"] = fit.slope_stderr;
    d["points"] = fit.points;
    return d;
  });
}
