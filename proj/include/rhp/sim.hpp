#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "rhp/model.hpp"
#include "rhp/planner.hpp"

namespace rhp {

enum class Request { Sync, NoSync };

// Per-agent record of an execution. Action j leaves states[j] for states[j + 1]; the agent
// reached states[j] at t_ready[j], started the action at t_start[j] (after sending requests[j])
// and finished at t_end[j]. q[j + 1] is the task automaton state after action j.
struct Behavior {
  std::vector<int> states;
  std::vector<int> actions;
  std::vector<Request> requests;
  std::vector<std::int64_t> t_ready, t_start, t_end;
  std::vector<int> q;

  int size() const { return static_cast<int>(actions.size()); }
};

struct CompatibilityVerdict {
  bool ok = true;
  int agent = -1;
  int index = -1;
  std::string reason;
};

// Every sync request must be matched by a sync request of each other agent of its group with
// the same start time, and one of the participants must not have waited. `groups` lists the
// agents that synchronize together; empty means everybody.
CompatibilityVerdict check_compatibility(const std::vector<Behavior>& b,
                                         const std::vector<std::vector<int>>& groups = {});

// True when, within each group, the j-th actions of all members start at the same time.
bool equal_start_times(const std::vector<Behavior>& b, const std::vector<std::vector<int>>& groups = {});

enum class Verdict { Pending, Violated, Satisfied, Ongoing };
const char* verdict_name(Verdict v);

struct MonitorResult {
  std::vector<std::int64_t> times;  // instants of the owner's non-silent actions
  std::vector<ServiceMask> word;    // letters restricted to the task's atoms
  std::vector<int> run;             // recorded automaton states at those instants, initial first
  bool run_consistent = true;       // `run` is a run of the automaton over `word`
  int visits = 0;                   // accepting states in `run` after the initial one
  Verdict verdict = Verdict::Pending;
};

// Letters are the union of the dependency set's services started exactly at the owner's
// non-silent instants, restricted to the task atoms. Only instants up to `until` are read.
MonitorResult monitor_local_satisfaction(const std::vector<AgentModel>& agents, const std::vector<Behavior>& b,
                                         const TaskSpec& task,
                                         std::int64_t until = std::numeric_limits<std::int64_t>::max());

struct ServiceRecord {
  ServiceMask services = 0;
  std::int64_t start = 0, end = 0;
  int round = 0;  // barriers completed when the service started
};

struct RoundRecord {
  std::int64_t t = 0;
  std::vector<ClassReport> classes;
  bool feasible = true;
};

struct RunMetrics {
  int iterations = 0;   // planning rounds, including replanning during backtracking
  int sync_rounds = 0;  // completed barriers
  int nosync = 0;       // postponed synchronizations
  int backtracks = 0;
  std::int64_t end_time = 0;
  std::vector<int> visits;                           // per agent
  std::vector<std::vector<ServiceRecord>> services;  // per agent
  std::vector<RoundRecord> rounds;
  std::vector<double> wall_ms;  // per planning round

  int max_h_used() const;
  int max_H_used() const;
  int max_class_size() const;
  int max_product_states() const;
  // End time of the k-th non-silent action of `agent`, -1 if there were fewer.
  std::int64_t completion_time(int agent, int k) const;
  // Barriers completed before the k-th service of `agent` started, -1 if there were fewer.
  int rounds_until_service(int agent, int k) const;
};

enum class RunStatus { Completed, IterationLimit, Unsatisfiable };
const char* status_name(RunStatus s);

struct RunResult {
  RunStatus status = RunStatus::Completed;
  std::vector<Behavior> behaviors;
  std::vector<int> final_priority;
  RunMetrics metrics;
  std::vector<std::vector<int>> groups;  // synchronization groups used
  int backtrack_depth = 0;               // depth walked by the last (exhausting) backtrack
  std::string report;
};

// Runs the receding-horizon loop with the given configuration (the scenario's own [config] is
// ignored). Event log lines are written to `log` when non-null.
RunResult simulate(const Scenario& sc, const SimConfig& cfg, std::ostream* log = nullptr);

}  // namespace rhp
