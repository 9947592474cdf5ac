#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rhp/dependency.hpp"
#include "rhp/intersection.hpp"
#include "rhp/model.hpp"
#include "rhp/product.hpp"

namespace rhp {

struct HorizonConfig {
  int h = 3;
  int H = 5;
  int H_cap = 0;  // 0: max |S_i| over the class times (h_used + 1)
};

// Grows h by one until the intersection automaton has an accepting state. Infeasible when the
// layered construction reaches its fixpoint first.
struct HExtension {
  IntersectionAutomaton a;
  int h_used = 0;
  bool feasible = false;
};
HExtension extend_h_until_accepting(const ClassInput& in, int h0);

// Grows H by one until a progressive state exists, the product stops growing, or H passes `cap`.
struct PExtension {
  ProductSystem p;
  int H_used = 0;
  std::optional<int> best;
};
PExtension extend_H_until_progressive(const IntersectionAutomaton& a, const std::vector<AgentModel>& agents,
                                      const std::vector<int>& s0, int H0, int cap);

// The fragment an agent is currently following and how much of it has been executed.
struct AgentPlan {
  int plan_id = -1;
  AgentFragment frag;
  int cursor = 0;

  bool exhausted() const { return cursor >= static_cast<int>(frag.actions.size()); }
  int next_action() const { return frag.actions[cursor]; }
};

struct PlannerState {
  std::vector<int> priority;  // agent indices, most important first
  std::vector<int> s, q;
  std::vector<AgentPlan> plans;
  std::map<std::vector<int>, Value> vmax;  // by sorted class members
  int next_plan_id = 0;

  static PlannerState initial(const Scenario& sc);
  void reset_vmax() { vmax.clear(); }
  // Moves `agent` to the end of the priority order.
  void demote(int agent);
};

struct ClassReport {
  std::vector<int> members;
  int h_used = 0, H_used = 0;
  int a_states = 0, p_states = 0;
  std::size_t a_edges = 0;
  Value best{0, 0};
  Value vmax{0, 0};
  bool replaced = false;
  bool feasible = true;
  int path_length = 0;
  std::string failure;
};

struct PlanOutcome {
  Partition partition;
  int partition_h = 0;  // horizon the partition was computed with
  std::vector<ClassReport> classes;
  bool feasible = true;
  int failed_class = -1;
};

class Planner {
 public:
  Planner(const Scenario& sc, HorizonConfig cfg);

  // One round of finite-horizon planning for every class whose members all lie in `group`
  // (every agent when null). Fragments and V_max are updated in `st`.
  PlanOutcome plan(PlannerState& st, const std::vector<int>* group = nullptr) const;

  const std::vector<TaskContext>& contexts() const { return contexts_; }
  std::vector<ForbiddenStep>& forbidden() { return forbidden_; }
  const std::vector<ForbiddenStep>& forbidden() const { return forbidden_; }
  const HorizonConfig& config() const { return cfg_; }

 private:
  PlanOutcome plan_with(PlannerState& st, const std::vector<int>* group, const Partition& partition) const;

  const Scenario& sc_;
  HorizonConfig cfg_;
  std::vector<TaskContext> contexts_;
  std::vector<ForbiddenStep> forbidden_;
};

}  // namespace rhp
