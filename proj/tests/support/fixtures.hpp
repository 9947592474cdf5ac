#pragma once

#include "rhp/buchi.hpp"

namespace rhp::testing {

// Four-state automaton over {a,b,c}: q1 needs a and b to reach q2; q2 splits on c between
// the accepting q3 (only {} afterwards) and the trap q4.
inline BuchiAutomaton three_service_automaton() {
  BuchiAutomaton b = read_automaton(
      "props: a b c\n"
      "states: q1 q2 q3 q4\n"
      "init: q1\n"
      "accepting: q3\n"
      "q1 ; {a,b} ; q2\n"
      "q1 ; {a,b,c} ; q2\n"
      "q2 ; {a} ; q3\n"
      "q2 ; {a,c} ; q4\n"
      "q3 ; {} ; q3\n"
      "q4 ; {b} ; q4\n"
      "q4 ; {c} ; q4\n"
      "q4 ; {b,c} ; q4\n");
  return b;
}

}  // namespace rhp::testing
