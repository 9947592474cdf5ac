#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rhp/buchi.hpp"
#include "rhp/ltl.hpp"

namespace rhp {

// Services are numbered globally across agents; a service set is a bit mask over those ids.
using ServiceMask = std::uint64_t;
constexpr int kMaxServices = 64;

// Either the silent set of an agent or a (possibly empty) set of services.
struct Label {
  bool silent = true;
  ServiceMask services = 0;

  static Label silence() { return {true, 0}; }
  static Label of(ServiceMask m) { return {false, m}; }
  bool operator==(const Label&) const = default;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServiceRegistry {
  std::vector<std::string> names;
  std::vector<int> owner;  // agent index per service
  std::map<std::string, int> index;

  int add(const std::string& name, int agent);  // throws ModelError("alphabet overlap ...") on reuse
  int find(const std::string& name) const;      // -1 if unknown
  ServiceMask mask_of(const std::vector<std::string>& names) const;
  std::string set_string(ServiceMask m) const;  // "{a,b}"
  std::string label_string(const Label& l) const;  // "eps" or "{a,b}"
  int size() const { return static_cast<int>(names.size()); }
};

struct TransitionSystem {
  std::vector<std::string> state_names;
  int init = 0;
  std::vector<std::string> action_names;
  // Outgoing (action, dst) pairs per state, sorted by action id.
  std::vector<std::vector<std::pair<int, int>>> out;

  int num_states() const { return static_cast<int>(state_names.size()); }
  int num_actions() const { return static_cast<int>(action_names.size()); }
  int step(int s, int action) const;  // -1 if undefined
  int state_index(const std::string& name) const;
  int action_index(const std::string& name) const;
  std::vector<int> distances_from(int s) const;  // unit-weight, -1 if unreachable
};

struct GridService {
  int x = 0, y = 0;
  std::vector<std::string> services;
};

// Cell grid; state id = y * width + x. Walls block moves between the two listed cells.
struct GridSpec {
  int width = 0, height = 0;
  int start_x = 0, start_y = 0;
  std::vector<std::array<int, 4>> walls;   // x1 y1 x2 y2 (adjacent cells)
  std::vector<std::array<int, 3>> hwalls;  // y x0 x1: wall below row y for columns x0..x1
  std::vector<std::array<int, 3>> vwalls;  // x y0 y1: wall left of column x for rows y0..y1
  std::vector<GridService> services;

  int cell(int x, int y) const { return y * width + x; }
  int cell_x(int s) const { return s % width; }
  int cell_y(int s) const { return s / width; }
  bool blocked(int x1, int y1, int x2, int y2) const;
};

struct AgentModel {
  std::string id;
  int index = 0;
  TransitionSystem ts;
  std::vector<int> services;   // global ids of this agent's own services
  ServiceMask service_mask = 0;
  std::vector<Label> labels;   // per action
  std::optional<GridSpec> grid;

  const Label& label(int action) const { return labels[action]; }
};

// Builds the grid transition system. Actions: stay, N, S, E, W, then one self-loop action per
// distinct service set in declaration order. Service names must already be registered.
AgentModel build_grid_world(const std::string& id, int index, const GridSpec& spec,
                            const ServiceRegistry& reg);

// Checks determinism, mutual reachability, silent self-loops and that labels only use the
// agent's own services. Throws ModelError naming the violated property.
void validate_agent(const AgentModel& m, const ServiceRegistry& reg);

// Trace fragment s0 a1 s1 a2 s2 ... given as states (n+1) and actions (n).
std::vector<Label> service_set_sequence(const AgentModel& m, const std::vector<int>& states,
                                        const std::vector<int>& actions);
// The word: non-silent elements only (the empty set is kept).
std::vector<ServiceMask> nonsilent_word(const std::vector<Label>& v);

struct TaskSpec {
  int owner = 0;
  std::string formula_text;
  FormulaPtr formula;
  std::vector<int> deps;              // sorted, contains owner
  bool deps_overridden = false;
  BuchiAutomaton ba;                  // over `props` = sorted formula atoms
  std::vector<int> prop_service;      // global service id of each BA proposition
  ServiceMask atoms_mask = 0;

  Symbol project(ServiceMask m) const;  // global mask -> BA symbol
  ServiceMask unproject(Symbol s) const;
};

TaskSpec compile_task(int owner, const std::string& formula, const ServiceRegistry& reg,
                      const std::vector<AgentModel>& agents,
                      const std::optional<std::vector<int>>& deps_override = std::nullopt);

enum class SyncMode { Stepwise, Event };
SyncMode parse_mode(const std::string& s);  // "stepwise" | "event"

struct DurationRange {
  std::int64_t lo = 5, hi = 10;
  bool operator==(const DurationRange&) const = default;
};

struct SimConfig {
  int h = 3;
  int H = 5;
  int H_cap = 0;  // 0: max |S_i| * (h_used + 1)
  std::uint64_t seed = 1;
  SyncMode mode = SyncMode::Stepwise;
  int stop_visits = 3;
  int max_iters = 10000;
  DurationRange duration;
  bool param_sync = false;
  bool operator==(const SimConfig&) const = default;
};

struct Scenario {
  ServiceRegistry services;
  std::vector<AgentModel> agents;
  std::vector<TaskSpec> tasks;  // one per agent, same index; "true" when none declared
  std::vector<bool> task_declared;
  std::vector<std::optional<DurationRange>> agent_duration;
  SimConfig config;
  // Declared service list per agent (names), kept for serialization.
  std::vector<std::vector<std::string>> declared_services;

  int num_agents() const { return static_cast<int>(agents.size()); }
  DurationRange duration_of(int agent) const {
    return agent_duration[agent] ? *agent_duration[agent] : config.duration;
  }
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);
std::string serialize_scenario(const Scenario& s);

// Structural equality of everything the scenario file determines.
bool same_scenario(const Scenario& a, const Scenario& b);

// Horizon heuristic: H = median over agents of the smallest TS distance between two distinct
// service-providing actions (agents with fewer than two are skipped); h = 3.
std::pair<int, int> suggest_horizons(const std::vector<AgentModel>& agents);

}  // namespace rhp
