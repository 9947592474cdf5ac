#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rhp/intersection.hpp"
#include "rhp/model.hpp"

namespace rhp {

struct ProductState {
  std::vector<int> s;  // per member TS state
  int qa = 0;          // intersection-automaton state
  bool moved = false;  // some step so far had a non-silent action of the first member
  int depth = 0;
  int parent = -1;        // breadth-first tree
  int parent_combo = -1;  // joint action code of the tree edge
};

struct ProductSystem {
  std::vector<int> members;
  std::vector<int> action_radix;  // joint action code = sum(action_m * action_radix[m])
  std::vector<ProductState> states;
  std::vector<std::vector<std::pair<int, int>>> out;  // (joint action code, dst); only if recorded
  int H = 0;
  bool record_edges = false;
  std::size_t frontier = 0;     // first state not expanded yet
  std::shared_ptr<void> index;  // state lookup kept for incremental growth

  int num_states() const { return static_cast<int>(states.size()); }
  std::vector<int> decode(int combo) const;
  // No state sits at depth H, so deeper horizons add nothing.
  bool closed() const;
};

// Layered breadth-first construction to depth H. A joint action whose members are all silent
// keeps the automaton component; otherwise the automaton must have an edge on the joint labels.
// Successors are generated in (member, action id) lexicographic order.
ProductSystem build_product(const IntersectionAutomaton& a, const std::vector<AgentModel>& agents,
                            const std::vector<int>& s0, int H, bool record_edges = false);
// Continues the breadth-first construction of `p` up to the larger horizon H.
void grow_product(ProductSystem& p, const IntersectionAutomaton& a, const std::vector<AgentModel>& agents, int H);

// Progressive states have V above the initial value and a first-member service on the way.
// Maximum V, then smaller depth, then earlier discovery in the breadth-first construction.
std::optional<int> find_max_progressive(const ProductSystem& p, const IntersectionAutomaton& a);

// States from the initial state to `target` along the breadth-first tree (both included).
std::vector<int> shortest_path_to(const ProductSystem& p, int target);

struct AgentFragment {
  std::vector<int> states;   // n + 1
  std::vector<int> actions;  // n
  std::vector<int> q;        // n + 1 automaton states of the agent's own task
};

struct PlanFragment {
  std::vector<int> members;
  std::vector<AgentFragment> agents;  // per member
  Value target{0, 0};

  int length() const { return agents.empty() ? 0 : static_cast<int>(agents[0].actions.size()); }
};

PlanFragment project(const ProductSystem& p, const IntersectionAutomaton& a, const std::vector<int>& path);

}  // namespace rhp
