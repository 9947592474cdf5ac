#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rhp/buchi.hpp"
#include "rhp/model.hpp"

namespace rhp {

// Per-task data that only changes when the automaton changes (backtracking).
struct TaskContext {
  SymbolSet realizable;    // symbols the dependency set can produce at an instant where the owner acts
  std::vector<char> live;  // states with a nonempty language over `realizable`
};

// Symbols b can read when the owner provides one of its non-silent label sets and every other
// member of its dependency set is either silent or provides one of its own.
SymbolSet realizable_symbols(const TaskSpec& task, const std::vector<AgentModel>& agents);
TaskContext make_task_context(const TaskSpec& task, const std::vector<AgentModel>& agents);

// Joint step excluded by backtracking: full BA state vector and per-agent labels.
struct ForbiddenStep {
  std::vector<int> q;
  std::vector<Label> labels;
  bool operator==(const ForbiddenStep&) const = default;
};

struct ClassInput {
  std::vector<int> members;  // priority order
  const std::vector<TaskSpec>* tasks = nullptr;
  const std::vector<AgentModel>* agents = nullptr;  // component alphabets come from the label images
  const std::vector<TaskContext>* contexts = nullptr;
  std::vector<int> q;  // current BA state of every agent
  const std::vector<ForbiddenStep>* forbidden = nullptr;
};

struct IntersectionState {
  std::vector<int> q;  // per member
  int k = 1;
  bool acc = false;  // the step into this state completed the counter's current target
  int depth = 0;
};

// V = (k, -dist to an accepting state); second component kNegInfinity when unreachable.
constexpr int kNegInfinity = -kInfinity;
using Value = std::pair<int, int>;

class IntersectionAutomaton {
 public:
  std::vector<int> members;
  ServiceMask class_atoms = 0;
  // Per member: component alphabet; index 0 is silent, index c > 0 is images[m][c - 1].
  std::vector<std::vector<ServiceMask>> images;
  std::vector<int> radix;  // mixed-radix code of a joint symbol: sum(c_m * radix[m])
  std::vector<IntersectionState> states;  // state 0 is the initial state
  std::vector<std::vector<std::pair<int, int>>> out;  // (symbol code, dst), sorted
  std::vector<int> dist;                              // to an accepting state, kInfinity if none
  int h = 0;
  bool closed = false;  // no state sits at depth h, so further layers add nothing

  int num_states() const { return static_cast<int>(states.size()); }
  std::size_t num_edges() const;
  bool has_accepting() const;
  Value value(int s) const;
  int component_index(int member, const Label& l) const;  // -1 if not in the alphabet
  std::vector<Label> decode(int code) const;
  std::string dump(const ServiceRegistry& reg) const;
};

// Layered breadth-first construction to depth h, followed by removal of states that cannot
// reach an accepting state (the initial state is always kept) unless `prune` is false.
IntersectionAutomaton build_intersection(const ClassInput& in, int h, bool prune = true);

}  // namespace rhp
