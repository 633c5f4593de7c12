// SPDX-License-Identifier: Apache-2.0
#include "parint/io.hpp"

#include <stdexcept>

namespace parint {

nlohmann::json to_json(const PiecewiseLagrange& p) {
  const auto& spec = p.spec();
  const auto c = p.coefficients();
  return {{"k", spec.k}, {"r", spec.r}, {"d1", spec.d}, {"coefficients", std::vector<double>(c.begin(), c.end())}};
}

PiecewiseLagrange piecewise_from_json(const nlohmann::json& j) {
  try {
    const MeshSpec spec{j.at("k").get<int>(), j.at("r").get<int>(), j.at("d1").get<int>()};
    return PiecewiseLagrange(spec, j.at("coefficients").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed interpolant record: ") + e.what());
  }
}

nlohmann::json to_json(const LevelSchedule& s) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& lp : s.levels) {
    levels.push_back({{"k", lp.k},
                      {"n1", lp.n1},
                      {"n2", lp.n2},
                      {"base", lp.base},
                      {"log2_summands", lp.log2_summands},
                      {"repetitions", lp.repetitions},
                      {"theta", lp.theta},
                      {"charged", lp.charged}});
  }
  return {{"n", s.n},
          {"r", s.r},
          {"d1", s.d1},
          {"d2", s.d2},
          {"mode", s.mode == EstimatorMode::amplitude ? "amplitude" : "classical"},
          {"m", s.m},
          {"m_tilde", s.m_tilde},
          {"l", s.l},
          {"p", s.p},
          {"v", s.v},
          {"total", s.total},
          {"levels", levels}};
}

nlohmann::json to_json(const QueryLedger& ledger) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [key, amount] : ledger.entries())
    out.push_back({{"level", key.first}, {"phase", to_string(key.second)}, {"queries", amount}});
  return out;
}

nlohmann::json to_json(const ParintResult& result) {
  return {{"approximation", to_json(result.approximation)},
          {"metadata",
           {{"seed", result.seed},
            {"schedule", to_json(result.schedule)},
            {"ledger", to_json(result.ledger)},
            {"total", result.ledger.total()}}}};
}

}  // namespace parint
