#include "rhp/dependency.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace rhp {

bool participating(const BuchiAutomaton& b, const std::vector<char>& live, int q, Symbol alphabet, bool own) {
  if (own) return true;
  if (alphabet == 0) return false;
  std::vector<Symbol> extras;  // all subsets of `alphabet`
  for (Symbol e = alphabet;; e = (e - 1) & alphabet) {
    extras.push_back(e);
    if (e == 0) break;
  }
  for (const auto& edge : b.out[q]) {
    if (!live[edge.dst]) continue;
    for (Symbol s = 0; s < b.num_symbols(); ++s) {
      if (!edge.on.test(s)) continue;
      for (Symbol e : extras)
        if (!edge.on.test((s & ~alphabet) | e)) return true;
    }
  }
  return false;
}

bool participating(const BuchiAutomaton& b, int q, Symbol alphabet, bool own) {
  return participating(b, live_states(b), q, alphabet, own);
}

std::vector<int> horizon_participants(const BuchiAutomaton& b, const std::vector<Symbol>& alphabets, int owner,
                                      int q, int h) {
  auto live = live_states(b);
  std::set<int> states;
  for (int j = 0; j < std::max(h, 1); ++j) {
    auto r = reachable_k(b, q, j);
    states.insert(r.begin(), r.end());
  }
  std::vector<int> res;
  for (int i = 0; i < static_cast<int>(alphabets.size()); ++i)
    for (int s : states)
      if (participating(b, live, s, alphabets[i], i == owner)) {
        res.push_back(i);
        break;
      }
  return res;
}

std::vector<int> horizon_participants(const TaskSpec& task, const std::vector<AgentModel>& agents, int q, int h) {
  std::vector<Symbol> alphabets;
  for (const auto& a : agents) alphabets.push_back(task.project(a.service_mask));
  return horizon_participants(task.ba, alphabets, task.owner, q, h);
}

int Partition::class_of(int agent) const {
  for (int c = 0; c < static_cast<int>(classes.size()); ++c)
    if (std::find(classes[c].begin(), classes[c].end(), agent) != classes[c].end()) return c;
  return -1;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

Partition classes_from(UnionFind& uf, const std::vector<int>& priority) {
  Partition p;
  std::vector<int> slot(priority.size(), -1);
  for (int agent : priority) {
    int root = uf.find(agent);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(p.classes.size());
      p.classes.emplace_back();
    }
    p.classes[slot[root]].push_back(agent);
  }
  return p;
}

}  // namespace

Partition dynamic_partition(const std::vector<TaskSpec>& tasks, const std::vector<AgentModel>& agents,
                            const std::vector<int>& q, int h, const std::vector<int>& priority) {
  UnionFind uf(static_cast<int>(agents.size()));
  for (int i = 0; i < static_cast<int>(tasks.size()); ++i)
    for (int j : horizon_participants(tasks[i], agents, q[i], h)) uf.unite(i, j);
  return classes_from(uf, priority);
}

Partition offline_partition(const std::vector<TaskSpec>& tasks, const std::vector<int>& priority) {
  UnionFind uf(static_cast<int>(tasks.size()));
  for (int i = 0; i < static_cast<int>(tasks.size()); ++i)
    for (int d : tasks[i].deps) uf.unite(i, d);
  return classes_from(uf, priority);
}

}  // namespace rhp
