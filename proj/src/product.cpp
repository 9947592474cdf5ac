#include "rhp/product.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>

namespace rhp {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

using StateIndex = std::unordered_map<std::vector<int>, int, VecHash>;

std::vector<int> key_of(const ProductState& st) {
  std::vector<int> k = st.s;
  k.push_back(st.qa);
  k.push_back(st.moved);
  return k;
}

}  // namespace

std::vector<int> ProductSystem::decode(int combo) const {
  std::vector<int> r;
  for (std::size_t m = 0; m < members.size(); ++m) r.push_back(combo / action_radix[m] % (action_radix[m + 1] / action_radix[m]));
  return r;
}

bool ProductSystem::closed() const { return frontier == states.size(); }

ProductSystem build_product(const IntersectionAutomaton& a, const std::vector<AgentModel>& agents,
                            const std::vector<int>& s0, int H, bool record_edges) {
  ProductSystem p;
  p.members = a.members;
  p.record_edges = record_edges;
  p.action_radix.push_back(1);
  for (int m : a.members) p.action_radix.push_back(p.action_radix.back() * agents[m].ts.num_actions());
  auto index = std::make_shared<StateIndex>();
  ProductState init;
  init.s = s0;
  p.states.push_back(init);
  index->emplace(key_of(init), 0);
  p.index = index;
  if (record_edges) p.out.emplace_back();
  grow_product(p, a, agents, H);
  return p;
}

void grow_product(ProductSystem& p, const IntersectionAutomaton& a, const std::vector<AgentModel>& agents, int H) {
  const int n = static_cast<int>(a.members.size());
  p.H = std::max(p.H, H);
  auto& index = *static_cast<StateIndex*>(p.index.get());
  // Per member, the automaton component index of every action's label.
  std::vector<std::vector<int>> comp(n);
  for (int i = 0; i < n; ++i) {
    const auto& am = agents[a.members[i]];
    for (int act = 0; act < am.ts.num_actions(); ++act) comp[i].push_back(a.component_index(i, am.labels[act]));
  }

  std::vector<std::size_t> pick(n);
  std::vector<int> dst_s(n);
  std::size_t cur = p.frontier;
  for (; cur < p.states.size(); ++cur) {
    if (p.states[cur].depth >= p.H) break;  // layers are appended in depth order
    const ProductState src = p.states[cur];
    std::vector<const std::vector<std::pair<int, int>>*> moves(n);
    bool any = true;
    for (int i = 0; i < n; ++i) {
      moves[i] = &agents[a.members[i]].ts.out[src.s[i]];
      any = any && !moves[i]->empty();
    }
    if (!any) continue;
    std::fill(pick.begin(), pick.end(), 0);
    const auto& aout = a.out[src.qa];
    while (true) {
      int code = 0, combo = 0;
      bool silent = true, ok = true;
      for (int i = 0; i < n; ++i) {
        const auto& [act, d] = (*moves[i])[pick[i]];
        dst_s[i] = d;
        combo += act * p.action_radix[i];
        int c = comp[i][act];
        if (c < 0) ok = false;
        if (c > 0) silent = false;
        code += c * a.radix[i];
      }
      if (ok) {
        bool moved = src.moved || comp[0][(*moves[0])[pick[0]].first] > 0;
        auto emit = [&](int qa) {
          ProductState nxt;
          nxt.s = dst_s;
          nxt.qa = qa;
          nxt.moved = moved;
          nxt.depth = src.depth + 1;
          auto key = key_of(nxt);
          auto it = index.find(key);
          int dst;
          if (it == index.end()) {
            dst = static_cast<int>(p.states.size());
            nxt.parent = static_cast<int>(cur);
            nxt.parent_combo = combo;
            index.emplace(std::move(key), dst);
            p.states.push_back(std::move(nxt));
            if (p.record_edges) p.out.emplace_back();
          } else {
            dst = it->second;
          }
          if (p.record_edges) p.out[cur].push_back({combo, dst});
        };
        if (silent) {
          emit(src.qa);
        } else {
          auto lo = std::lower_bound(aout.begin(), aout.end(), std::make_pair(code, -1));
          for (auto it = lo; it != aout.end() && it->first == code; ++it) emit(it->second);
        }
      }
      int i = n - 1;
      while (i >= 0 && ++pick[i] == moves[i]->size()) pick[i--] = 0;
      if (i < 0) break;
    }
  }
  p.frontier = cur;
}

std::optional<int> find_max_progressive(const ProductSystem& p, const IntersectionAutomaton& a) {
  const Value base = a.value(p.states[0].qa);
  std::optional<int> best;
  auto better = [&](int x, int y) {
    Value vx = a.value(p.states[x].qa), vy = a.value(p.states[y].qa);
    if (vx != vy) return vx > vy;
    if (p.states[x].depth != p.states[y].depth) return p.states[x].depth < p.states[y].depth;
    // Discovery order: stay actions come first, so idle members are not dragged around.
    return x < y;
  };
  for (int s = 0; s < p.num_states(); ++s) {
    if (!p.states[s].moved || !(a.value(p.states[s].qa) > base)) continue;
    if (!best || better(s, *best)) best = s;
  }
  return best;
}

std::vector<int> shortest_path_to(const ProductSystem& p, int target) {
  std::vector<int> path;
  for (int s = target; s >= 0; s = p.states[s].parent) path.push_back(s);
  std::reverse(path.begin(), path.end());
  return path;
}

PlanFragment project(const ProductSystem& p, const IntersectionAutomaton& a, const std::vector<int>& path) {
  PlanFragment f;
  f.members = p.members;
  f.agents.resize(p.members.size());
  for (std::size_t j = 0; j < path.size(); ++j) {
    const auto& st = p.states[path[j]];
    const auto& as = a.states[st.qa];
    std::vector<int> acts;
    if (j > 0) acts = p.decode(st.parent_combo);
    for (std::size_t i = 0; i < p.members.size(); ++i) {
      auto& fr = f.agents[i];
      fr.states.push_back(st.s[i]);
      fr.q.push_back(as.q[i]);
      if (j > 0) fr.actions.push_back(acts[i]);
    }
  }
  if (!path.empty()) f.target = a.value(p.states[path.back()].qa);
  return f;
}

}  // namespace rhp
