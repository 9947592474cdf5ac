#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "rhp/sim.hpp"
#include "support/random_instances.hpp"
#include "support/two_services.hpp"

using namespace rhp;
using rhp::testing::shared_service_behaviors;
using rhp::testing::kTwoServices;

namespace {


SimConfig config_of(const Scenario& sc, SyncMode mode, std::uint64_t seed) {
  SimConfig c = sc.config;
  c.mode = mode;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Monitor, SharedServicesSatisfyFirstTask) {
  auto sc = load_scenario(kTwoServices);
  auto beh = shared_service_behaviors(sc);
  auto r = monitor_local_satisfaction(sc.agents, beh, sc.tasks[0]);
  EXPECT_EQ(r.times, (std::vector<std::int64_t>{0, 4, 5}));
  auto& reg = sc.services;
  EXPECT_EQ(r.word, (std::vector<ServiceMask>{reg.mask_of({"a"}), reg.mask_of({"a", "b"}), 0}));
  EXPECT_EQ(r.verdict, Verdict::Satisfied);
  EXPECT_TRUE(r.run_consistent);
}

TEST(Monitor, SameServicesViolateSecondTask) {
  auto sc = load_scenario(kTwoServices);
  auto beh = shared_service_behaviors(sc);
  auto r = monitor_local_satisfaction(sc.agents, beh, sc.tasks[1]);
  EXPECT_EQ(r.times, (std::vector<std::int64_t>{1, 2, 4, 5}));
  auto& reg = sc.services;
  EXPECT_EQ(r.word, (std::vector<ServiceMask>{reg.mask_of({"b"}), reg.mask_of({"b"}), reg.mask_of({"a", "b"}), 0}));
  EXPECT_EQ(r.verdict, Verdict::Violated);
}

TEST(Monitor, PendingWithoutServicesAndOwnWordWhenAlone) {
  auto sc = load_scenario(kTwoServices);
  auto beh = shared_service_behaviors(sc);
  auto r = monitor_local_satisfaction(sc.agents, beh, sc.tasks[0], -1);
  EXPECT_TRUE(r.word.empty());
  EXPECT_EQ(r.verdict, Verdict::Pending);
  // With only itself in the dependency set the word is the agent's own non-silent labels.
  std::string text = kTwoServices;
  text.replace(text.find("a & X (a & b)"), 13, "G F a");
  auto solo = load_scenario(text);
  auto w = monitor_local_satisfaction(solo.agents, shared_service_behaviors(solo), solo.tasks[0]);
  EXPECT_EQ(w.word, (std::vector<ServiceMask>{sc.services.mask_of({"a"}), sc.services.mask_of({"a"}), 0}));
}

TEST(Compatibility, VacuousForNosyncOnly) {
  auto sc = load_scenario(kTwoServices);
  EXPECT_TRUE(check_compatibility(shared_service_behaviors(sc)).ok);
}

TEST(Compatibility, StepwiseRunsAreCompatibleAndAligned) {
  auto sc = load_scenario(R"toml(
[config]
h = 2
H = 4
stop_visits = 3
[agent.p]
services = ["a"]
[agent.p.grid]
width = 3
height = 1
start = [0, 0]
services = [[2, 0, "a"]]
[agent.q]
services = ["b"]
[agent.q.grid]
width = 2
height = 2
start = [0, 0]
services = [[1, 1, "b"]]
[task.p]
formula = "G F (a & b)"
[task.q]
formula = "G F b"
)toml");
  auto r = simulate(sc, config_of(sc, SyncMode::Stepwise, 4));
  ASSERT_EQ(r.status, RunStatus::Completed);
  ASSERT_GT(r.behaviors[0].size(), 3);
  EXPECT_TRUE(check_compatibility(r.behaviors).ok);
  EXPECT_TRUE(equal_start_times(r.behaviors));
  // Shifting one start time breaks the match at that index.
  auto broken = r.behaviors;
  broken[1].t_start[2] += 1;
  auto v = check_compatibility(broken);
  EXPECT_FALSE(v.ok);
  EXPECT_TRUE((v.agent == 1 && v.index == 2) || v.index == 2);
}

TEST(Simulation, SingleAgentRecursOnShortLine) {
  auto sc = load_scenario(R"toml(
[config]
h = 2
H = 3
stop_visits = 6
[agent.r]
services = ["a"]
[agent.r.grid]
width = 3
height = 1
start = [0, 0]
services = [[2, 0, "a"]]
[task.r]
formula = "G F a"
)toml");
  auto r = simulate(sc, config_of(sc, SyncMode::Stepwise, 1));
  ASSERT_EQ(r.status, RunStatus::Completed);
  EXPECT_EQ(r.metrics.visits[0], 6);
  // After the first visit every service follows the previous one within H steps.
  const auto& b = r.behaviors[0];
  int last = -1;
  for (int j = 0; j < b.size(); ++j)
    if (!sc.agents[0].labels[b.actions[j]].silent) {
      if (last >= 0) EXPECT_LE(j - last, 3);
      last = j;
    }
}

TEST(Simulation, SameSeedSameLog) {
  std::mt19937_64 rng(5);
  auto sc = load_scenario(rhp::testing::random_micro_scenario(rng, 2));
  for (auto mode : {SyncMode::Stepwise, SyncMode::Event}) {
    std::ostringstream a, b;
    simulate(sc, config_of(sc, mode, 9), &a);
    simulate(sc, config_of(sc, mode, 9), &b);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_FALSE(a.str().empty());
  }
}

TEST(Simulation, SilentPrefixIsExecutedWithoutSync) {
  auto sc = load_scenario(R"toml(
[config]
h = 1
H = 7
stop_visits = 1
[agent.r]
services = ["a"]
[agent.r.grid]
width = 7
height = 1
start = [0, 0]
services = [[6, 0, "a"]]
[task.r]
formula = "F a"
)toml");
  std::ostringstream log;
  auto r = simulate(sc, config_of(sc, SyncMode::Event, 1), &log);
  ASSERT_EQ(r.status, RunStatus::Completed);
  const auto& b = r.behaviors[0];
  // Six silent moves then the service: one sync before the first move, five nosync, one sync.
  ASSERT_EQ(b.size(), 7);
  int nosync = 0;
  for (int j = 0; j < 6; ++j) nosync += b.requests[j] == Request::NoSync;
  EXPECT_EQ(nosync, 5);
  EXPECT_EQ(b.requests[6], Request::Sync);
  EXPECT_EQ(r.metrics.sync_rounds, 2);
}

TEST(Simulation, EveryRunIsCompatibleAndMonitorAgrees) {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 12; ++round) {
    auto sc = load_scenario(rhp::testing::random_micro_scenario(rng, round));
    for (auto mode : {SyncMode::Stepwise, SyncMode::Event}) {
      auto r = simulate(sc, config_of(sc, mode, round + 1));
      EXPECT_TRUE(check_compatibility(r.behaviors).ok) << round;
      if (mode == SyncMode::Stepwise) EXPECT_TRUE(equal_start_times(r.behaviors));
      for (int i = 0; i < 2; ++i) {
        auto m = monitor_local_satisfaction(sc.agents, r.behaviors, sc.tasks[i]);
        EXPECT_TRUE(m.run_consistent) << round << " agent " << i;
        EXPECT_EQ(m.visits, r.metrics.visits[i]) << round;
        if (r.status == RunStatus::Completed) EXPECT_NE(m.verdict, Verdict::Violated);
      }
    }
  }
}

TEST(Backtracking, AlternativeSuccessorUndoesEarlyCommitment) {
  // x may commit early to never seeing a again, which blocks y; the engine has to revise the
  // automaton state x took and let x serve a once.
  auto sc = load_scenario(R"toml(
[config]
h = 2
H = 3
stop_visits = 3
duration = [1, 3]
[agent.x]
services = ["a"]
states = ["s0", "s1", "s2"]
init = "s0"
transitions = [
  ["s0", "stay", "s0", "eps"], ["s0", "next", "s1", "eps"], ["s0", "jump", "s1", "eps"],
  ["s0", "nothing", "s0", "{}"], ["s1", "stay", "s1", "eps"], ["s1", "next", "s2", "eps"],
  ["s1", "jump", "s0", "eps"], ["s2", "stay", "s2", "eps"], ["s2", "next", "s0", "eps"],
  ["s2", "do", "s2", "{a}"],
]
[agent.y]
services = ["b"]
states = ["s0", "s1", "s2"]
init = "s0"
transitions = [
  ["s0", "stay", "s0", "eps"], ["s0", "next", "s1", "eps"], ["s1", "stay", "s1", "eps"],
  ["s1", "next", "s2", "eps"], ["s2", "stay", "s2", "eps"], ["s2", "next", "s0", "eps"],
  ["s2", "jump", "s2", "eps"], ["s2", "do", "s2", "{b}"],
]
[task.x]
formula = "F G !a"
[task.y]
formula = "F a"
)toml");
  for (auto mode : {SyncMode::Stepwise, SyncMode::Event}) {
    SimConfig cfg = sc.config;
    cfg.mode = mode;
    cfg.seed = 108;
    std::ostringstream log;
    auto r = simulate(sc, cfg, &log);
    ASSERT_EQ(r.status, RunStatus::Completed) << r.report;
    EXPECT_GE(r.metrics.backtracks, 1);
    EXPECT_NE(log.str().find("\"kind\":\"alternative\""), std::string::npos);
    for (int i = 0; i < 2; ++i) {
      auto m = monitor_local_satisfaction(sc.agents, r.behaviors, sc.tasks[i]);
      EXPECT_TRUE(m.run_consistent) << i;
      EXPECT_EQ(m.visits, r.metrics.visits[i]);
      EXPECT_NE(m.verdict, Verdict::Violated);
    }
  }
}

TEST(Backtracking, ExhaustionReportsUnsatisfiable) {
  std::string text = kTwoServices;
  text.replace(text.find("b & X (b & a)"), 13, "G !b");
  auto sc = load_scenario(text);
  SimConfig cfg = sc.config;
  cfg.h = 2;
  cfg.H = 3;
  std::ostringstream log;
  auto r = simulate(sc, cfg, &log);
  EXPECT_EQ(r.status, RunStatus::Unsatisfiable);
  EXPECT_EQ(r.report, "unsatisfiable: backtracking exhausted the execution history (depth " +
                          std::to_string(r.backtrack_depth) + ")");
  const std::string last = log.str().substr(log.str().rfind("{\"v\""));
  EXPECT_NE(last.find("\"kind\":\"stop\""), std::string::npos);
  EXPECT_NE(last.find("unsatisfiable"), std::string::npos);
}
