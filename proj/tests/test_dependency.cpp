#include <gtest/gtest.h>

#include <random>

#include "rhp/dependency.hpp"
#include "support/fixtures.hpp"

using namespace rhp;

namespace {

// Alphabets of three agents owning a, b, c respectively, as masks over {a,b,c}.
const std::vector<Symbol> kAlphabets{1, 2, 4};

std::string names(const std::vector<int>& agents) {
  std::string r;
  for (int a : agents) r += "abc"[a];
  return r;
}

Scenario three_agents(const std::string& f1, const std::string& f2, const std::string& f3) {
  std::string text;
  for (const char* id : {"x", "y", "z"}) {
    std::string svc = id == std::string("x") ? "a" : id == std::string("y") ? "b" : "c";
    text += std::string("[agent.") + id + "]\nservices = [\"" + svc + "\"]\nstates = [\"s\"]\ninit = \"s\"\n" +
            "transitions = [[\"s\", \"stay\", \"s\", \"eps\"], [\"s\", \"do\", \"s\", \"{" + svc + "}\"]]\n";
  }
  text += "[task.x]\nformula = \"" + f1 + "\"\n[task.y]\nformula = \"" + f2 + "\"\n[task.z]\nformula = \"" + f3 + "\"\n";
  return load_scenario(text);
}

}  // namespace

TEST(Participation, ThreeServiceAutomaton) {
  for (bool complete : {false, true}) {
    auto b = rhp::testing::three_service_automaton();
    if (complete) b = complete_deadlock_free(b);
    int q1 = b.state_index("q1"), q2 = b.state_index("q2"), q4 = b.state_index("q4");
    EXPECT_TRUE(participating(b, q1, kAlphabets[1]));
    EXPECT_FALSE(participating(b, q1, kAlphabets[2]));
    EXPECT_FALSE(participating(b, q4, kAlphabets[1]));
    EXPECT_FALSE(participating(b, q4, kAlphabets[2]));
    EXPECT_TRUE(participating(b, q2, kAlphabets[2]));
    for (int q = 0; q < b.num_states(); ++q) EXPECT_TRUE(participating(b, q, kAlphabets[0], true));
  }
}

TEST(Participation, HorizonAlphabets) {
  auto b = complete_deadlock_free(rhp::testing::three_service_automaton());
  int q1 = b.state_index("q1");
  EXPECT_EQ(names(horizon_participants(b, kAlphabets, 0, q1, 1)), "ab");
  EXPECT_EQ(names(horizon_participants(b, kAlphabets, 0, q1, 2)), "abc");
  EXPECT_EQ(names(horizon_participants(b, kAlphabets, 0, q1, 0)), "ab");
  EXPECT_EQ(names(horizon_participants(b, kAlphabets, 0, b.state_index("q4"), 5)), "a");
}

TEST(Partition, PurelyLocalFormulasGiveSingletons) {
  auto s = three_agents("G F a", "F b", "G c");
  auto p = dynamic_partition(s.tasks, s.agents, {0, 0, 0}, 3, {0, 1, 2});
  EXPECT_EQ(p.classes, (std::vector<std::vector<int>>{{0}, {1}, {2}}));
  EXPECT_EQ(offline_partition(s.tasks, {0, 1, 2}).classes, p.classes);
}

TEST(Partition, RequiredForeignServiceCouplesAgents) {
  // Task of x: first b, then a. The edge out of the initial state requires b.
  auto s = three_agents("b & X F a", "true", "true");
  const auto& t = s.tasks[0];
  EXPECT_EQ(horizon_participants(t, s.agents, t.ba.init, 1), (std::vector<int>{0, 1}));
  auto p = dynamic_partition(s.tasks, s.agents, {t.ba.init, 0, 0}, 1, {0, 1, 2});
  EXPECT_EQ(p.classes, (std::vector<std::vector<int>>{{0, 1}, {2}}));
}

TEST(Partition, OfflineClosure) {
  auto chain = three_agents("F (a & b)", "G F b", "F c");
  EXPECT_EQ(offline_partition(chain.tasks, {0, 1, 2}).classes, (std::vector<std::vector<int>>{{0, 1}, {2}}));
  auto all = three_agents("F (a & b)", "G F (b & c)", "G F c");
  EXPECT_EQ(offline_partition(all.tasks, {0, 1, 2}).classes, (std::vector<std::vector<int>>{{0, 1, 2}}));
  EXPECT_EQ(offline_partition(all.tasks, {2, 0, 1}).classes, (std::vector<std::vector<int>>{{2, 0, 1}}));
}

TEST(Partition, RefinesOfflineAndCoarsensWithHorizon) {
  std::mt19937_64 rng(21);
  const char* pool[] = {"F (a & b)", "G F (b & X c)", "a U (b | c)", "G F c", "F (a & X F (b & c))", "G (a | F b)"};
  for (int round = 0; round < 20; ++round) {
    auto s = three_agents(pool[rng() % 6], pool[rng() % 6], pool[rng() % 6]);
    auto offline = offline_partition(s.tasks, {0, 1, 2});
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> q;
      for (const auto& t : s.tasks) q.push_back(static_cast<int>(rng() % t.ba.num_states()));
      Partition prev;
      for (int h = 0; h <= 4; ++h) {
        auto p = dynamic_partition(s.tasks, s.agents, q, h, {0, 1, 2});
        for (const auto& cls : p.classes) {
          int oc = offline.class_of(cls[0]);
          for (int m : cls) EXPECT_EQ(offline.class_of(m), oc);
        }
        if (h > 0)
          for (const auto& cls : prev.classes)
            for (int m : cls) EXPECT_EQ(p.class_of(m), p.class_of(cls[0]));
        prev = p;
      }
      // Owner always participates.
      for (int i = 0; i < 3; ++i) {
        auto parts = horizon_participants(s.tasks[i], s.agents, q[i], 1);
        EXPECT_NE(std::find(parts.begin(), parts.end(), i), parts.end());
      }
    }
  }
}
