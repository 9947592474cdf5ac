#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rhp/model.hpp"

namespace rhp {

enum class OracleStatus { Feasible, Infeasible, Refused };
const char* oracle_status_name(OracleStatus s);

// Centralized baseline over one class: every member takes exactly one action per step, task
// automata read the union of the members' labels at their own non-silent steps, and a rotating
// counter requires each member to land in its accepting set in turn.
struct OracleResult {
  OracleStatus status = OracleStatus::Infeasible;
  std::vector<int> members;
  std::uint64_t team_states = 0;  // product of the members' TS sizes
  double bound = 0;               // team_states * product of automaton sizes * (members + 1)
  std::uint64_t explored = 0;     // reachable product states
  std::string message;

  // Accepting lasso: positions 0..m with position m equal to position loop_start.
  std::vector<std::vector<int>> s, q;    // per position, per member
  std::vector<std::vector<int>> actions;  // per step, per member
  int loop_start = -1;
};

constexpr std::uint64_t kOracleLimit = 1000000;

OracleResult centralized_synthesize(const Scenario& sc, const std::vector<int>& members,
                                    std::uint64_t limit = kOracleLimit);

// One verdict per offline class.
std::vector<OracleResult> oracle_check_feasible(const Scenario& sc, std::uint64_t limit = kOracleLimit);

}  // namespace rhp
