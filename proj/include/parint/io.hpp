// SPDX-License-Identifier: Apache-2.0
//
// JSON records.
//
//   PiecewiseLagrange: {"k", "r", "d1", "coefficients": [... in mesh order]}
//   LevelSchedule:     {"n", "r", "d1", "d2", "mode", "m", "m_tilde", "l", "p",
//                       "v", "total", "levels": [{"k", "n1", "n2", "base",
//                       "log2_summands", "repetitions", "theta", "charged"}]}
//   ParintResult:      {"approximation": ..., "metadata": {"seed", "schedule",
//                       "ledger": [{"level", "phase", "queries"}], "total"}}
#pragma once

#include "json.hpp"
#include "parint/grid.hpp"
#include "parint/multilevel.hpp"
#include "parint/schedule.hpp"

namespace parint {

[[nodiscard]] nlohmann::json to_json(const PiecewiseLagrange& p);
[[nodiscard]] PiecewiseLagrange piecewise_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const LevelSchedule& s);
[[nodiscard]] nlohmann::json to_json(const QueryLedger& ledger);
[[nodiscard]] nlohmann::json to_json(const ParintResult& result);

}  // namespace parint
