#pragma once

#include <string>

#include "json.hpp"
#include "rhp/model.hpp"
#include "rhp/sim.hpp"

namespace rhp {

// FNV-1a over the canonical scenario text and every configuration field that affects a run.
std::string scenario_digest(const Scenario& sc, const SimConfig& cfg);

// Deterministic run summary: configuration, status, counters, per-agent services and per-round
// planning sizes. Wall-clock figures are kept out; see wall_clock_json.
nlohmann::ordered_json run_report_json(const Scenario& sc, const SimConfig& cfg, const RunResult& r);
nlohmann::ordered_json wall_clock_json(const RunResult& r);

}  // namespace rhp
