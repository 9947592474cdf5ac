#include "rhp/report.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <numeric>

namespace rhp {

using Json = nlohmann::ordered_json;

std::string scenario_digest(const Scenario& sc, const SimConfig& cfg) {
  std::string text = serialize_scenario(sc);
  text += "\nrun: h=" + std::to_string(cfg.h) + " H=" + std::to_string(cfg.H) + " H_cap=" + std::to_string(cfg.H_cap) +
          " seed=" + std::to_string(cfg.seed) + " mode=" + (cfg.mode == SyncMode::Event ? "event" : "stepwise") +
          " stop_visits=" + std::to_string(cfg.stop_visits) + " max_iters=" + std::to_string(cfg.max_iters) +
          " duration=" + std::to_string(cfg.duration.lo) + ":" + std::to_string(cfg.duration.hi) +
          " param_sync=" + (cfg.param_sync ? "1" : "0");
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) h = (h ^ c) * 1099511628211ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json run_report_json(const Scenario& sc, const SimConfig& cfg, const RunResult& r) {
  const auto& m = r.metrics;
  Json j;
  j["scenario_digest"] = scenario_digest(sc, cfg);
  j["mode"] = cfg.mode == SyncMode::Event ? "event" : "stepwise";
  j["seed"] = cfg.seed;
  j["h"] = cfg.h;
  j["H"] = cfg.H;
  j["param_sync"] = cfg.param_sync;
  j["status"] = status_name(r.status);
  if (!r.report.empty()) j["report"] = r.report;

  Json mj;
  mj["iterations"] = m.iterations;
  mj["sync_rounds"] = m.sync_rounds;
  mj["nosync"] = m.nosync;
  mj["backtracks"] = m.backtracks;
  mj["end_time"] = m.end_time;
  mj["max_h_used"] = m.max_h_used();
  mj["max_H_used"] = m.max_H_used();
  mj["max_class_size"] = m.max_class_size();
  mj["max_product_states"] = m.max_product_states();
  mj["compatible"] = check_compatibility(r.behaviors, r.groups).ok;
  Json agents = Json::object();
  for (int i = 0; i < sc.num_agents(); ++i) {
    Json a;
    a["accepting_visits"] = m.visits[i];
    a["actions"] = r.behaviors[i].size();
    Json sv = Json::array();
    for (const auto& s : m.services[i]) {
      Json e;
      e["services"] = sc.services.set_string(s.services);
      e["start"] = s.start;
      e["end"] = s.end;
      e["round"] = s.round;
      sv.push_back(e);
    }
    a["services"] = sv;
    agents[sc.agents[i].id] = a;
  }
  mj["agents"] = agents;
  Json rounds = Json::array();
  for (const auto& rd : m.rounds) {
    Json e;
    e["t"] = rd.t;
    e["feasible"] = rd.feasible;
    Json cls = Json::array();
    for (const auto& c : rd.classes) {
      Json cj;
      Json mem = Json::array();
      for (int x : c.members) mem.push_back(sc.agents[x].id);
      cj["members"] = mem;
      cj["h"] = c.h_used;
      cj["H"] = c.H_used;
      cj["automaton_states"] = c.a_states;
      cj["product_states"] = c.p_states;
      cls.push_back(cj);
    }
    e["classes"] = cls;
    rounds.push_back(e);
  }
  mj["rounds"] = rounds;
  j["metrics"] = mj;
  return j;
}

Json wall_clock_json(const RunResult& r) {
  Json j;
  const auto& w = r.metrics.wall_ms;
  j["planning_ms_total"] = std::accumulate(w.begin(), w.end(), 0.0);
  j["planning_ms_max"] = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
  j["planning_ms_per_round"] = w;
  return j;
}

}  // namespace rhp
