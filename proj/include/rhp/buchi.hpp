#pragma once

#include <bitset>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rhp/ltl.hpp"

namespace rhp {

// Alphabets are enumerated explicitly, so the proposition count per automaton is capped.
constexpr int kMaxProps = 10;
constexpr int kMaxSymbols = 1 << kMaxProps;

using Symbol = std::uint32_t;                // bit i set <=> props[i] holds
using SymbolSet = std::bitset<kMaxSymbols>;  // a set of symbols

constexpr int kInfinity = std::numeric_limits<int>::max();

class AlphabetCapExceeded : public std::runtime_error {
 public:
  explicit AlphabetCapExceeded(std::size_t n)
      : std::runtime_error("alphabet cap exceeded: " + std::to_string(n) + " propositions (max " +
                           std::to_string(kMaxProps) + ")") {}
};

struct BuchiEdge {
  int dst;
  SymbolSet on;
};

struct BuchiAutomaton {
  std::vector<std::string> props;
  std::vector<std::string> state_names;
  std::vector<char> accepting;
  std::vector<std::vector<BuchiEdge>> out;
  int init = 0;

  int num_states() const { return static_cast<int>(state_names.size()); }
  Symbol num_symbols() const { return Symbol{1} << props.size(); }
  SymbolSet all_symbols() const;

  int add_state(const std::string& name, bool acc = false);
  void add_transitions(int src, const SymbolSet& on, int dst);
  void add_transition(int src, Symbol sym, int dst);
  void remove_transition(int src, Symbol sym, int dst);

  bool has_transition(int q, Symbol s, int dst) const;
  void successors(int q, Symbol s, std::vector<int>& out) const;
  std::vector<int> successors(int q, Symbol s) const;
  std::vector<int> graph_successors(int q) const;
  bool is_deadlock_free() const;
  std::size_t num_transitions() const;  // number of (src, symbol, dst) triples

  int state_index(const std::string& name) const;  // -1 if absent
  int prop_index(const std::string& name) const;   // -1 if absent
  Symbol symbol_of(const std::set<std::string>& names) const;
  std::string symbol_string(Symbol s) const;  // "{a,b}"
};

// Tableau translation with degeneralization, followed by dead-state trimming, a bisimulation
// quotient and completion. `props` may be larger than the formula's atoms.
BuchiAutomaton ltl_to_buchi(const FormulaPtr& f, const std::vector<std::string>& props);

// Routes every missing (q, sigma) to one shared non-accepting sink; identity if already complete.
BuchiAutomaton complete_deadlock_free(const BuchiAutomaton& b);

std::set<int> reachable_k(const BuchiAutomaton& b, int q, int k);
int dist(const BuchiAutomaton& b, int q, int q2);               // kInfinity if unreachable
std::vector<int> distances_from(const BuchiAutomaton& b, int q);  // kInfinity if unreachable

bool accepts_lasso(const BuchiAutomaton& b, const std::vector<Symbol>& prefix,
                   const std::vector<Symbol>& period);

// States with a nonempty language when only symbols in `allowed` may be read.
std::vector<char> live_states(const BuchiAutomaton& b, const SymbolSet& allowed);
std::vector<char> live_states(const BuchiAutomaton& b);

// States from which every word is accepted (accepting states that can stay inside the set
// under every symbol). A sufficient condition for universality.
std::vector<char> universal_states(const BuchiAutomaton& b);

// Line-based text format:
//   props: a b c
//   states: q1 q2 q3
//   init: q1
//   accepting: q3
//   q1 ; {a,b} ; q2
std::string write_automaton(const BuchiAutomaton& b);
BuchiAutomaton read_automaton(const std::string& text);

}  // namespace rhp
