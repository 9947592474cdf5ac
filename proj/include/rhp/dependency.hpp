#pragma once

#include <vector>

#include "rhp/buchi.hpp"
#include "rhp/model.hpp"

namespace rhp {

// Whether the services in `alphabet` (a mask over b's propositions) are required or forbidden on
// some transition leaving q: some edge (q, sigma, q') exists while (q, (sigma \ alphabet) | extra, q')
// does not, for some extra within `alphabet`. Only edges into live states count as witnesses, so
// completion edges and trap states never make an alphabet participate. `own` short-circuits.
bool participating(const BuchiAutomaton& b, const std::vector<char>& live, int q, Symbol alphabet, bool own);
bool participating(const BuchiAutomaton& b, int q, Symbol alphabet, bool own = false);

// Agents (indices into `agents`, ascending) whose alphabets participate in some state reachable
// from q in j steps, 0 <= j < max(h, 1).
std::vector<int> horizon_participants(const TaskSpec& task, const std::vector<AgentModel>& agents, int q, int h);

// Same, for a bare automaton and per-agent alphabets; `owner` is an index into `alphabets`.
std::vector<int> horizon_participants(const BuchiAutomaton& b, const std::vector<Symbol>& alphabets, int owner,
                                      int q, int h);

struct Partition {
  std::vector<std::vector<int>> classes;  // members of each class in priority order

  int class_of(int agent) const;
  bool operator==(const Partition&) const = default;
};

// Union-find closure of "j participates in task i within h of q_i"; classes are listed by their
// highest-priority member and members are listed in `priority` order.
Partition dynamic_partition(const std::vector<TaskSpec>& tasks, const std::vector<AgentModel>& agents,
                            const std::vector<int>& q, int h, const std::vector<int>& priority);

// Closure of "d in D_i".
Partition offline_partition(const std::vector<TaskSpec>& tasks, const std::vector<int>& priority);

}  // namespace rhp
