#pragma once

#include <string>
#include <vector>

#include "rhp/sim.hpp"

namespace rhp::testing {

// Two single-state agents, one serving a and one serving b, with tasks that need both services
// in the same step.
inline const char* const kTwoServices = R"toml(
[agent.one]
services = ["a"]
states = ["s"]
init = "s"
transitions = [["s", "stay", "s", "eps"], ["s", "a", "s", "{a}"], ["s", "none", "s", "{}"]]

[agent.two]
services = ["b"]
states = ["s"]
init = "s"
transitions = [["s", "stay", "s", "eps"], ["s", "b", "s", "{b}"], ["s", "none", "s", "{}"]]

[task.one]
formula = "a & X (a & b)"

[task.two]
formula = "b & X (b & a)"
)toml";

// Behavior with unit durations starting at 0, automaton states following the first live successor.
inline Behavior unit_behavior(const Scenario& sc, int agent, const std::vector<std::string>& actions,
                       const std::vector<std::vector<std::string>>& letters) {
  const auto& m = sc.agents[agent];
  const auto& t = sc.tasks[agent];
  auto live = live_states(t.ba);
  Behavior b;
  b.states.push_back(0);
  b.q.push_back(t.ba.init);
  for (std::size_t j = 0; j < actions.size(); ++j) {
    int act = m.ts.action_index(actions[j]);
    b.actions.push_back(act);
    b.requests.push_back(Request::NoSync);
    b.t_ready.push_back(j);
    b.t_start.push_back(j);
    b.t_end.push_back(j + 1);
    b.states.push_back(0);
    int q = b.q.back();
    if (!m.labels[act].silent) {
      auto succ = t.ba.successors(q, t.project(sc.services.mask_of(letters[j])));
      q = succ.front();
      for (int d : succ)
        if (live[d]) {
          q = d;
          break;
        }
    }
    b.q.push_back(q);
  }
  return b;
}

inline std::vector<Behavior> shared_service_behaviors(const Scenario& sc) {
  // Letters are the unions at each instant, used only to pick automaton states.
  return {unit_behavior(sc, 0, {"a", "stay", "stay", "stay", "a", "none", "stay", "stay"},
                        {{"a"}, {}, {}, {}, {"a", "b"}, {}, {}, {}}),
          unit_behavior(sc, 1, {"stay", "b", "b", "stay", "b", "none", "stay", "stay"},
                        {{}, {"b"}, {"b"}, {}, {"a", "b"}, {}, {}, {}})};
}

}  // namespace rhp::testing
