#include <gtest/gtest.h>

#include <random>

#include "rhp/buchi.hpp"
#include "support/fixtures.hpp"
#include "support/lasso_eval.hpp"

using namespace rhp;
using rhp::testing::Letter;

namespace {

std::vector<Symbol> encode(const BuchiAutomaton& b, const std::vector<Letter>& w) {
  std::vector<Symbol> r;
  for (const auto& l : w) r.push_back(b.symbol_of(l));
  return r;
}

BuchiAutomaton translate(const std::string& text, const std::vector<std::string>& props) {
  return ltl_to_buchi(parse_ltl(text), props);
}

}  // namespace

TEST(Translate, TrueIsOneUniversalState) {
  auto b = translate("true", {"a", "b"});
  ASSERT_EQ(b.num_states(), 1);
  EXPECT_TRUE(b.accepting[0]);
  EXPECT_EQ(b.num_transitions(), 4u);
  EXPECT_TRUE(b.is_deadlock_free());
}

TEST(Translate, FalseHasEmptyLanguage) {
  auto b = translate("false", {"a"});
  EXPECT_FALSE(live_states(b)[b.init]);
  EXPECT_TRUE(b.is_deadlock_free());
}

TEST(Translate, ConjunctionWithNextOnTwoLassos) {
  auto b = translate("a & X (a & b)", {"a", "b"});
  EXPECT_TRUE(accepts_lasso(b, encode(b, {{"a"}, {"a", "b"}}), encode(b, {{}})));
  EXPECT_FALSE(accepts_lasso(b, encode(b, {{"b"}, {"b"}, {"a", "b"}}), encode(b, {{}})));
}

TEST(Translate, SecondAgentFormulaRejectsItsWord) {
  auto b = translate("b & X (b & a)", {"a", "b"});
  EXPECT_FALSE(accepts_lasso(b, encode(b, {{"b"}, {"b"}, {"a", "b"}}), encode(b, {{}})));
}

TEST(Translate, AlphabetCap) {
  std::vector<std::string> props;
  for (int i = 0; i < 11; ++i) props.push_back("p" + std::to_string(i));
  EXPECT_THROW(translate("p0", props), AlphabetCapExceeded);
}

TEST(Translate, UndeclaredAtomRejected) { EXPECT_THROW(translate("a & c", {"a"}), std::invalid_argument); }

TEST(Translate, InitialStateIsZero) {
  for (const char* s : {"G F a", "a U b", "F (a & X b)"}) EXPECT_EQ(translate(s, {"a", "b"}).init, 0) << s;
}

TEST(Translate, RecurrenceAgreesWithEvaluatorOnRandomLassos) {
  auto f = parse_ltl("G F a");
  auto b = ltl_to_buchi(f, {"a", "b"});
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto pre = rhp::testing::random_word(rng, {"a", "b"}, rng() % 4);
    auto per = rhp::testing::random_word(rng, {"a", "b"}, 1 + rng() % 4);
    EXPECT_EQ(accepts_lasso(b, encode(b, pre), encode(b, per)), rhp::testing::eval_lasso(f, pre, per));
  }
}

TEST(Translate, RandomFormulasAgreeWithEvaluator) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> props{"a", "b", "c"};
  for (int i = 0; i < 150; ++i) {
    auto f = rhp::testing::random_formula(rng, props, 4);
    auto b = ltl_to_buchi(f, props);
    ASSERT_TRUE(b.is_deadlock_free());
    for (int j = 0; j < 5; ++j) {
      auto pre = rhp::testing::random_word(rng, props, rng() % 4);
      auto per = rhp::testing::random_word(rng, props, 1 + rng() % 3);
      ASSERT_EQ(accepts_lasso(b, encode(b, pre), encode(b, per)), rhp::testing::eval_lasso(f, pre, per))
          << to_string(f);
    }
  }
}

TEST(Completion, IdentityOnCompleteAutomaton) {
  auto b = translate("G F a", {"a"});
  auto c = complete_deadlock_free(b);
  EXPECT_EQ(c.num_states(), b.num_states());
}

TEST(Completion, AddsOneSinkForThreeServiceAutomaton) {
  auto b = rhp::testing::three_service_automaton();
  auto c = complete_deadlock_free(b);
  ASSERT_EQ(c.num_states(), b.num_states() + 1);
  const int sink = c.num_states() - 1;
  EXPECT_FALSE(c.accepting[sink]);
  EXPECT_TRUE(c.is_deadlock_free());
  const int q3 = c.state_index("q3");
  for (Symbol s = 0; s < c.num_symbols(); ++s) {
    auto succ = c.successors(q3, s);
    if (s == 0) EXPECT_EQ(succ, std::vector<int>{q3});
    else EXPECT_EQ(succ, std::vector<int>{sink});
  }
}

TEST(Completion, PreservesLassoAcceptanceOnRandomAutomata) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 100; ++n) {
    BuchiAutomaton b;
    b.props = {"a", "b"};
    int ns = 1 + rng() % 4;
    for (int q = 0; q < ns; ++q) b.add_state("r" + std::to_string(q), rng() % 3 == 0);
    for (int q = 0; q < ns; ++q)
      for (Symbol s = 0; s < b.num_symbols(); ++s)
        for (int d = 0; d < ns; ++d)
          if (rng() % 4 == 0) b.add_transition(q, s, d);
    auto c = complete_deadlock_free(b);
    ASSERT_TRUE(c.is_deadlock_free());
    for (int j = 0; j < 10; ++j) {
      std::vector<Symbol> pre(rng() % 3), per(1 + rng() % 3);
      for (auto& s : pre) s = rng() % 4;
      for (auto& s : per) s = rng() % 4;
      ASSERT_EQ(accepts_lasso(b, pre, per), accepts_lasso(c, pre, per));
    }
  }
}

TEST(Reachability, ThreeServiceAutomaton) {
  auto b = rhp::testing::three_service_automaton();
  int q1 = b.state_index("q1"), q2 = b.state_index("q2"), q3 = b.state_index("q3"), q4 = b.state_index("q4");
  EXPECT_EQ(reachable_k(b, q1, 0), std::set<int>{q1});
  EXPECT_EQ(reachable_k(b, q1, 1), std::set<int>{q2});
  EXPECT_EQ(reachable_k(b, q1, 2), (std::set<int>{q3, q4}));
  EXPECT_EQ(dist(b, q1, q1), 0);
  EXPECT_EQ(dist(b, q1, q3), 2);
  EXPECT_EQ(dist(b, q4, q3), kInfinity);
}

TEST(Reachability, StepRecurrenceAndDistanceBounds) {
  std::mt19937_64 rng(9);
  for (int n = 0; n < 30; ++n) {
    auto b = ltl_to_buchi(rhp::testing::random_formula(rng, {"a", "b"}, 2), {"a", "b"});
    if (b.num_states() > 40) continue;
    for (int q = 0; q < b.num_states(); ++q) {
      for (int k = 0; k < 4; ++k) {
        std::set<int> expect;
        for (int p : reachable_k(b, q, k))
          for (int d : b.graph_successors(p)) expect.insert(d);
        EXPECT_EQ(reachable_k(b, q, k + 1), expect);
        for (int p : reachable_k(b, q, k)) EXPECT_LE(dist(b, q, p), k);
      }
      auto from_q = distances_from(b, q);
      for (int m = 0; m < b.num_states(); ++m) {
        auto from_m = distances_from(b, m);
        for (int t = 0; t < b.num_states(); ++t)
          if (from_q[m] != kInfinity && from_m[t] != kInfinity) ASSERT_LE(from_q[t], from_q[m] + from_m[t]);
      }
    }
  }
}

TEST(Liveness, UniversalAndLiveStates) {
  auto b = rhp::testing::three_service_automaton();
  auto live = live_states(b);
  EXPECT_TRUE(live[b.state_index("q1")]);
  EXPECT_TRUE(live[b.state_index("q3")]);
  EXPECT_FALSE(live[b.state_index("q4")]);
  auto t = translate("F a", {"a"});
  auto u = universal_states(t);
  int count = 0;
  for (char x : u) count += x;
  EXPECT_EQ(count, 1);
  EXPECT_FALSE(u[t.init]);
}

TEST(TextFormat, RoundTrip) {
  auto b = translate("G (!a | F b)", {"a", "b"});
  auto c = read_automaton(write_automaton(b));
  EXPECT_EQ(write_automaton(c), write_automaton(b));
}

TEST(TextFormat, Errors) {
  EXPECT_THROW(read_automaton("props: a\nq ; {z} ; q\ninit: q\n"), std::invalid_argument);
  EXPECT_THROW(read_automaton("props: a\nq ; a ; q\ninit: q\n"), std::invalid_argument);
  EXPECT_THROW(read_automaton("props: a\nq ; {a} ; q\n"), std::invalid_argument);
}
