#include "rhp/oracle.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "rhp/dependency.hpp"

namespace rhp {

const char* oracle_status_name(OracleStatus s) {
  switch (s) {
    case OracleStatus::Feasible: return "feasible";
    case OracleStatus::Infeasible: return "infeasible";
    case OracleStatus::Refused: return "refused";
  }
  return "?";
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

// State layout: s (n), q (n), counter. The counter waits for member c; value n marks acceptance.
struct TeamProduct {
  int n = 0;
  std::vector<std::vector<int>> states;
  std::vector<std::vector<std::pair<int, std::vector<int>>>> out;  // (dst, joint actions)
};

TeamProduct explore(const Scenario& sc, const std::vector<int>& members) {
  TeamProduct p;
  const int n = static_cast<int>(members.size());
  p.n = n;
  std::unordered_map<std::vector<int>, int, VecHash> index;
  std::vector<int> init;
  for (int m : members) init.push_back(sc.agents[m].ts.init);
  for (int m : members) init.push_back(sc.tasks[m].ba.init);
  init.push_back(0);
  index.emplace(init, 0);
  p.states.push_back(init);
  p.out.emplace_back();

  std::vector<std::size_t> pick(n);
  std::vector<std::vector<int>> succ(n);
  for (std::size_t cur = 0; cur < p.states.size(); ++cur) {
    const std::vector<int> src = p.states[cur];
    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      std::vector<int> acts(n), dst_s(n);
      ServiceMask uni = 0;
      for (int i = 0; i < n; ++i) {
        const auto& mv = sc.agents[members[i]].ts.out[src[i]][pick[i]];
        acts[i] = mv.first;
        dst_s[i] = mv.second;
        const Label& l = sc.agents[members[i]].labels[mv.first];
        if (!l.silent) uni |= l.services;
      }
      for (int i = 0; i < n; ++i) {
        const Label& l = sc.agents[members[i]].labels[acts[i]];
        const auto& t = sc.tasks[members[i]];
        if (l.silent) succ[i] = {src[n + i]};
        else succ[i] = t.ba.successors(src[n + i], t.project(uni));
      }
      const int c0 = src[2 * n] == n ? 0 : src[2 * n];
      std::vector<std::size_t> qpick(n, 0);
      while (true) {
        std::vector<int> dst = dst_s;
        for (int i = 0; i < n; ++i) dst.push_back(succ[i][qpick[i]]);
        const int who = members[c0];
        bool adv = !sc.agents[who].labels[acts[c0]].silent && sc.tasks[who].ba.accepting[dst[n + c0]];
        dst.push_back(c0 + (adv ? 1 : 0));
        auto it = index.find(dst);
        int id;
        if (it == index.end()) {
          id = static_cast<int>(p.states.size());
          index.emplace(dst, id);
          p.states.push_back(dst);
          p.out.emplace_back();
        } else {
          id = it->second;
        }
        p.out[cur].push_back({id, acts});
        int i = n - 1;
        while (i >= 0 && ++qpick[i] == succ[i].size()) qpick[i--] = 0;
        if (i < 0) break;
      }
      int i = n - 1;
      while (i >= 0 && ++pick[i] == sc.agents[members[i]].ts.out[src[i]].size()) pick[i--] = 0;
      if (i < 0) break;
    }
  }
  return p;
}

// Nested depth-first search; returns (prefix edges to the seed, cycle edges) as edge lists
// of (state, edge index) when an accepting cycle is reachable.
struct Frame {
  int v;
  std::size_t next;
};

bool nested_dfs(const TeamProduct& p, std::vector<std::pair<int, int>>& prefix, std::vector<std::pair<int, int>>& cycle) {
  const int ns = static_cast<int>(p.states.size());
  auto accepting = [&](int v) { return p.states[v].back() == p.n; };
  std::vector<char> outer(ns, 0), inner(ns, 0);
  std::vector<Frame> stack{{0, 0}};
  outer[0] = 1;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < p.out[f.v].size()) {
      int w = p.out[f.v][f.next++].first;
      if (!outer[w]) {
        outer[w] = 1;
        stack.push_back({w, 0});
      }
      continue;
    }
    const int seed = f.v;
    if (accepting(seed)) {
      std::vector<Frame> in{{seed, 0}};
      while (!in.empty()) {
        Frame& g = in.back();
        if (g.next < p.out[g.v].size()) {
          const std::size_t e = g.next++;
          int w = p.out[g.v][e].first;
          if (w == seed) {
            for (std::size_t k = 0; k + 1 < stack.size(); ++k)
              prefix.push_back({stack[k].v, static_cast<int>(stack[k].next - 1)});
            for (const auto& h : in) cycle.push_back({h.v, static_cast<int>(h.next - 1)});
            return true;
          }
          if (!inner[w]) {
            inner[w] = 1;
            in.push_back({w, 0});
          }
          continue;
        }
        in.pop_back();
      }
    }
    stack.pop_back();
  }
  return false;
}

}  // namespace

OracleResult centralized_synthesize(const Scenario& sc, const std::vector<int>& members, std::uint64_t limit) {
  OracleResult r;
  r.members = members;
  const int n = static_cast<int>(members.size());
  r.team_states = 1;
  double automata = 1;
  std::ostringstream sizes;
  bool same = true;
  for (int m : members) {
    r.team_states *= static_cast<std::uint64_t>(sc.agents[m].ts.num_states());
    automata *= sc.tasks[m].ba.num_states();
    same = same && sc.agents[m].ts.num_states() == sc.agents[members[0]].ts.num_states();
  }
  r.bound = static_cast<double>(r.team_states) * automata * (n + 1);
  if (r.bound > static_cast<double>(limit)) {
    std::ostringstream os;
    os << "refused: team transition system has ";
    if (same && n > 1) os << sc.agents[members[0]].ts.num_states() << "^" << n << " = ";
    os << r.team_states << " states; product bound " << static_cast<std::uint64_t>(r.bound) << " exceeds " << limit;
    r.status = OracleStatus::Refused;
    r.message = os.str();
    return r;
  }
  auto p = explore(sc, members);
  r.explored = p.states.size();
  std::vector<std::pair<int, int>> prefix, cycle;
  if (!nested_dfs(p, prefix, cycle)) {
    r.status = OracleStatus::Infeasible;
    r.message = "infeasible: no accepting cycle among " + std::to_string(r.explored) + " product states";
    return r;
  }
  r.status = OracleStatus::Feasible;
  r.message = "feasible: lasso with prefix " + std::to_string(prefix.size()) + " and loop " +
              std::to_string(cycle.size()) + " over " + std::to_string(r.explored) + " product states";
  auto push_pos = [&](int v) {
    const auto& st = p.states[v];
    r.s.emplace_back(st.begin(), st.begin() + n);
    r.q.emplace_back(st.begin() + n, st.begin() + 2 * n);
  };
  for (const auto& [v, e] : prefix) {
    push_pos(v);
    r.actions.push_back(p.out[v][e].second);
  }
  r.loop_start = static_cast<int>(prefix.size());
  for (const auto& [v, e] : cycle) {
    push_pos(v);
    r.actions.push_back(p.out[v][e].second);
  }
  push_pos(cycle.front().first);
  return r;
}

std::vector<OracleResult> oracle_check_feasible(const Scenario& sc, std::uint64_t limit) {
  std::vector<int> order(sc.num_agents());
  for (int i = 0; i < sc.num_agents(); ++i) order[i] = i;
  std::vector<OracleResult> out;
  for (auto members : offline_partition(sc.tasks, order).classes) {
    std::sort(members.begin(), members.end());
    out.push_back(centralized_synthesize(sc, members, limit));
  }
  return out;
}

}  // namespace rhp
