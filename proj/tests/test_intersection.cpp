#include <gtest/gtest.h>

#include <deque>
#include <map>
#include <queue>
#include <random>

#include "rhp/intersection.hpp"
#include "rhp/product.hpp"
#include "support/fixtures.hpp"
#include "support/random_instances.hpp"

using namespace rhp;

namespace {

// Three one-state agents owning a, b, c; agent 0's task is the four-state example automaton.
Scenario example_class() {
  std::string text;
  const char* ids[] = {"x", "y", "z"};
  const char* svc[] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i)
    text += std::string("[agent.") + ids[i] + "]\nservices = [\"" + svc[i] +
            "\"]\nstates = [\"s\"]\ninit = \"s\"\ntransitions = [[\"s\", \"stay\", \"s\", \"eps\"], [\"s\", \"do\", "
            "\"s\", \"{" + svc[i] + "}\"], [\"s\", \"none\", \"s\", \"{}\"]]\n";
  Scenario s = load_scenario(text + "[task.x]\nformula = \"a & b & c\"\n");
  auto& t = s.tasks[0];
  t.ba = complete_deadlock_free(rhp::testing::three_service_automaton());
  t.deps = {0, 1, 2};
  return s;
}

ClassInput input_for(const Scenario& s, std::vector<int> members, std::vector<int> q) {
  ClassInput in;
  in.members = std::move(members);
  in.tasks = &s.tasks;
  in.agents = &s.agents;
  in.q = std::move(q);
  return in;
}

std::vector<int> initial_q(const Scenario& s) {
  std::vector<int> q;
  for (const auto& t : s.tasks) q.push_back(t.ba.init);
  return q;
}

std::vector<int> initial_s(const Scenario& s, const std::vector<int>& members) {
  std::vector<int> r;
  for (int m : members) r.push_back(s.agents[m].ts.init);
  return r;
}

}  // namespace

TEST(Intersection, ExampleAutomatonReachesAcceptanceAtDepthTwo) {
  auto s = example_class();
  auto in = input_for(s, {0, 1, 2}, initial_q(s));
  auto a1 = build_intersection(in, 1);
  EXPECT_FALSE(a1.has_accepting());
  auto a2 = build_intersection(in, 2);
  ASSERT_TRUE(a2.has_accepting());
  EXPECT_EQ(a2.value(0), (Value{1, -2}));
  const int q4 = s.tasks[0].ba.state_index("q4");
  for (const auto& st : a2.states) EXPECT_NE(st.q[0], q4);
  for (int i = 0; i < a2.num_states(); ++i) {
    if (a2.states[i].acc) EXPECT_EQ(a2.value(i).second, 0);
    EXPECT_NE(a2.value(i).second, kNegInfinity);
  }
  // Without pruning the trap state shows up only if it were live; it is not, so no q4 at all.
  auto raw = build_intersection(in, 2, false);
  EXPECT_GE(raw.num_states(), a2.num_states());
}

TEST(Intersection, SingletonClassFollowsAutomaton) {
  auto s = load_scenario(R"toml(
[agent.x]
services = ["a"]
states = ["s"]
init = "s"
transitions = [["s", "stay", "s", "eps"], ["s", "do", "s", "{a}"], ["s", "none", "s", "{}"]]
[task.x]
formula = "G F a"
)toml");
  auto a = build_intersection(input_for(s, {0}, initial_q(s)), 3, false);
  const auto& b = s.tasks[0].ba;
  for (const auto& st : a.states) EXPECT_TRUE(reachable_k(b, b.init, st.depth).count(st.q[0]));
  for (int i = 0; i < a.num_states(); ++i)
    for (const auto& [code, d] : a.out[i]) {
      bool acc = b.accepting[a.states[d].q[0]];
      EXPECT_EQ(a.states[d].k, a.states[i].k + (acc ? 1 : 0));
    }
  EXPECT_TRUE(a.has_accepting());
}

TEST(Intersection, FixpointWhenAcceptanceUnreachable) {
  auto s = load_scenario(R"toml(
[agent.x]
services = ["a", "b"]
states = ["s"]
init = "s"
transitions = [["s", "stay", "s", "eps"], ["s", "do", "s", "{a}"]]
[task.x]
formula = "F b"
)toml");
  auto in = input_for(s, {0}, initial_q(s));
  auto a3 = build_intersection(in, 3), a4 = build_intersection(in, 4);
  EXPECT_FALSE(a3.has_accepting());
  EXPECT_TRUE(a3.closed);
  EXPECT_EQ(a3.num_states(), a4.num_states());
  EXPECT_EQ(a3.num_edges(), a4.num_edges());
}

TEST(Intersection, CorrespondenceWithMemberAutomata) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 40; ++round) {
    auto s = load_scenario(rhp::testing::random_micro_scenario(rng, round));
    auto a = build_intersection(input_for(s, {0, 1}, initial_q(s)), 3, false);
    const int n = 2;
    for (int i = 0; i < a.num_states(); ++i)
      for (const auto& [code, d] : a.out[i]) {
        auto comps = a.decode(code);
        ServiceMask uni = 0;
        for (const auto& c : comps)
          if (!c.silent) uni |= c.services;
        for (int m = 0; m < n; ++m) {
          const auto& t = s.tasks[m];
          int from = a.states[i].q[m], to = a.states[d].q[m];
          if (comps[m].silent) EXPECT_EQ(from, to);
          else EXPECT_TRUE(t.ba.has_transition(from, t.project(uni), to));
        }
        // Counter never decreases and only moves on the targeted member's acceptance.
        int kappa = (a.states[i].k - 1) % n;
        bool inc = !comps[kappa].silent && s.tasks[kappa].ba.accepting[a.states[d].q[kappa]];
        EXPECT_EQ(a.states[d].k, a.states[i].k + (inc ? 1 : 0));
      }
  }
}

TEST(Intersection, RunsOfOneMemberLiftWithSilentPadding) {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 30; ++round) {
    auto s = load_scenario(rhp::testing::random_micro_scenario(rng, round));
    const int h = 3;
    auto a = build_intersection(input_for(s, {0, 1}, initial_q(s)), h, false);
    auto live = live_states(s.tasks[0].ba);
    // Member 0 acts alone for j <= h steps; every live automaton run must appear in the lifted states.
    std::map<int, std::set<int>> lifted;  // depth -> member-0 states at states reachable by member-0-only steps
    std::set<int> frontier{0};
    for (int j = 0; j <= h; ++j) {
      std::set<int> next;
      for (int st : frontier) {
        lifted[j].insert(a.states[st].q[0]);
        for (const auto& [code, d] : a.out[st])
          if (code % a.radix[1] != 0 && code / a.radix[1] == 0) next.insert(d);
      }
      frontier = next;
    }
    const auto& b = s.tasks[0].ba;
    std::set<int> run{b.init};
    for (int j = 1; j <= h; ++j) {
      std::set<int> nxt;
      for (int q : run)
        for (std::size_t c = 0; c < a.images[0].size(); ++c)
          for (int d : b.successors(q, s.tasks[0].project(a.images[0][c])))
            if (live[d]) nxt.insert(d);
      run = nxt;
      for (int q : run) EXPECT_TRUE(lifted[j].count(q)) << "depth " << j;
    }
  }
}

TEST(Product, NoProgressWithoutService) {
  auto s = load_scenario(R"toml(
[agent.x]
services = ["a"]
states = ["s"]
init = "s"
transitions = [["s", "stay", "s", "eps"]]
[task.x]
formula = "G F a"
)toml");
  auto a = build_intersection(input_for(s, {0}, initial_q(s)), 2);
  auto p = build_product(a, s.agents, initial_s(s, {0}), 4);
  EXPECT_FALSE(find_max_progressive(p, a).has_value());
}

TEST(Product, TwoCellGridFindsServiceWithinTwoSteps) {
  auto s = load_scenario(R"toml(
[agent.r]
services = ["a"]
[agent.r.grid]
width = 2
height = 1
start = [0, 0]
services = [[1, 0, "a"]]
[task.r]
formula = "F a"
)toml");
  auto a = build_intersection(input_for(s, {0}, initial_q(s)), 2);
  ASSERT_TRUE(a.has_accepting());
  auto p = build_product(a, s.agents, initial_s(s, {0}), 2);
  auto best = find_max_progressive(p, a);
  ASSERT_TRUE(best.has_value());
  EXPECT_LE(p.states[*best].depth, 2);
  auto path = shortest_path_to(p, *best);
  auto f = project(p, a, path);
  const auto& ts = s.agents[0].ts;
  EXPECT_EQ(f.agents[0].actions, (std::vector<int>{ts.action_index("E"), ts.action_index("a")}));
  EXPECT_EQ(shortest_path_to(p, 0), std::vector<int>{0});
  EXPECT_EQ(project(p, a, {0}).length(), 0);
}

TEST(Product, EdgesSatisfyConstructionRules) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 25; ++round) {
    auto s = load_scenario(rhp::testing::random_micro_scenario(rng, round));
    auto a = build_intersection(input_for(s, {0, 1}, initial_q(s)), 3);
    auto p = build_product(a, s.agents, initial_s(s, {0, 1}), 3, true);
    for (int i = 0; i < p.num_states(); ++i)
      for (const auto& [combo, d] : p.out[i]) {
        auto acts = p.decode(combo);
        bool silent = true;
        int code = 0;
        for (int m = 0; m < 2; ++m) {
          const auto& ts = s.agents[m].ts;
          EXPECT_EQ(ts.step(p.states[i].s[m], acts[m]), p.states[d].s[m]);
          int c = a.component_index(m, s.agents[m].labels[acts[m]]);
          silent = silent && c == 0;
          code += c * a.radix[m];
        }
        if (silent) {
          EXPECT_EQ(p.states[d].qa, p.states[i].qa);
        } else {
          bool found = false;
          for (const auto& [c, t] : a.out[p.states[i].qa]) found = found || (c == code && t == p.states[d].qa);
          EXPECT_TRUE(found);
        }
      }
  }
}

TEST(Product, PathsAreShortestAndProjectionsConsistent) {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int round = 0; round < 50; ++round) {
    auto s = load_scenario(rhp::testing::random_micro_scenario(rng, round));
    auto a = build_intersection(input_for(s, {0, 1}, initial_q(s)), 3);
    auto p = build_product(a, s.agents, initial_s(s, {0, 1}), 4, true);
    // Unit-weight Dijkstra over the recorded edges.
    std::vector<int> d(p.num_states(), kInfinity);
    using Item = std::pair<int, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[0] = 0;
    pq.push({0, 0});
    while (!pq.empty()) {
      auto [dv, v] = pq.top();
      pq.pop();
      if (dv != d[v]) continue;
      for (const auto& [c, w] : p.out[v])
        if (dv + 1 < d[w]) {
          d[w] = dv + 1;
          pq.push({d[w], w});
        }
    }
    for (int t = 0; t < p.num_states(); t += 1 + p.num_states() / 7) {
      auto path = shortest_path_to(p, t);
      EXPECT_EQ(static_cast<int>(path.size()) - 1, d[t]);
    }
    auto best = find_max_progressive(p, a);
    if (!best) continue;
    ++checked;
    // Brute-force the selection rule.
    for (int t = 0; t < p.num_states(); ++t) {
      if (!p.states[t].moved || !(a.value(p.states[t].qa) > a.value(0))) continue;
      auto vt = a.value(p.states[t].qa), vb = a.value(p.states[*best].qa);
      EXPECT_LE(vt, vb);
      if (vt == vb) EXPECT_GE(p.states[t].depth, p.states[*best].depth);
      if (vt == vb && p.states[t].depth == p.states[*best].depth) EXPECT_GE(t, *best);
    }
    auto f = project(p, a, shortest_path_to(p, *best));
    ASSERT_EQ(f.agents.size(), 2u);
    EXPECT_EQ(f.agents[0].actions.size(), f.agents[1].actions.size());
    for (int m = 0; m < 2; ++m) {
      const auto& fr = f.agents[m];
      const auto& ts = s.agents[m].ts;
      for (std::size_t j = 0; j < fr.actions.size(); ++j) {
        EXPECT_EQ(ts.step(fr.states[j], fr.actions[j]), fr.states[j + 1]);
        if (s.agents[m].labels[fr.actions[j]].silent) EXPECT_EQ(fr.q[j], fr.q[j + 1]);
      }
    }
    // Replaying the joint labels through each automaton reaches the projected end state.
    for (int m = 0; m < 2; ++m) {
      const auto& t = s.tasks[m];
      std::set<int> cur{f.agents[m].q[0]};
      for (std::size_t j = 0; j < f.agents[m].actions.size(); ++j) {
        const Label& own = s.agents[m].labels[f.agents[m].actions[j]];
        if (own.silent) continue;
        ServiceMask uni = 0;
        for (int o = 0; o < 2; ++o) {
          const Label& l = s.agents[o].labels[f.agents[o].actions[j]];
          if (!l.silent) uni |= l.services;
        }
        std::set<int> nxt;
        for (int q : cur)
          for (int d2 : t.ba.successors(q, t.project(uni))) nxt.insert(d2);
        cur = nxt;
      }
      EXPECT_TRUE(cur.count(f.agents[m].q.back()));
    }
  }
  EXPECT_GT(checked, 10);
}
