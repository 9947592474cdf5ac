#include "rhp/intersection.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace rhp {

SymbolSet realizable_symbols(const TaskSpec& task, const std::vector<AgentModel>& agents) {
  auto options = [&](int agent) {
    std::set<Symbol> o;
    const auto& m = agents[agent];
    for (int a = 0; a < m.ts.num_actions(); ++a)
      if (!m.labels[a].silent) o.insert(task.project(m.labels[a].services));
    return o;
  };
  SymbolSet cur;
  for (Symbol s : options(task.owner)) cur.set(s);
  for (int d : task.deps) {
    if (d == task.owner) continue;
    SymbolSet next = cur;  // d silent
    for (Symbol y : options(d))
      for (Symbol x = 0; x < task.ba.num_symbols(); ++x)
        if (cur.test(x)) next.set(x | y);
    cur = next;
  }
  return cur;
}

TaskContext make_task_context(const TaskSpec& task, const std::vector<AgentModel>& agents) {
  TaskContext c;
  c.realizable = realizable_symbols(task, agents);
  c.live = live_states(task.ba, c.realizable);
  return c;
}

std::size_t IntersectionAutomaton::num_edges() const {
  std::size_t n = 0;
  for (const auto& o : out) n += o.size();
  return n;
}

bool IntersectionAutomaton::has_accepting() const {
  for (const auto& s : states)
    if (s.acc) return true;
  return false;
}

Value IntersectionAutomaton::value(int s) const {
  return {states[s].k, dist[s] == kInfinity ? kNegInfinity : -dist[s]};
}

int IntersectionAutomaton::component_index(int member, const Label& l) const {
  if (l.silent) return 0;
  const auto& img = images[member];
  auto it = std::lower_bound(img.begin(), img.end(), l.services & class_atoms);
  if (it == img.end() || *it != (l.services & class_atoms)) return -1;
  return static_cast<int>(it - img.begin()) + 1;
}

std::vector<Label> IntersectionAutomaton::decode(int code) const {
  std::vector<Label> r;
  for (std::size_t m = 0; m < members.size(); ++m) {
    int c = code / radix[m] % static_cast<int>(images[m].size() + 1);
    r.push_back(c == 0 ? Label::silence() : Label::of(images[m][c - 1]));
  }
  return r;
}

std::string IntersectionAutomaton::dump(const ServiceRegistry& reg) const {
  std::ostringstream os;
  auto name = [&](int s) {
    std::string r;
    for (std::size_t m = 0; m < members.size(); ++m) r += (m ? "." : "") + std::to_string(states[s].q[m]);
    return r + "|" + std::to_string(states[s].k) + (states[s].acc ? "*" : "");
  };
  os << "members:";
  for (int m : members) os << ' ' << m;
  os << "\nstates:";
  for (int s = 0; s < num_states(); ++s) os << ' ' << name(s);
  os << "\ninit: " << name(0) << "\naccepting:";
  for (int s = 0; s < num_states(); ++s)
    if (states[s].acc) os << ' ' << name(s);
  os << '\n';
  for (int s = 0; s < num_states(); ++s) {
    auto v = value(s);
    os << "# V(" << name(s) << ") = (" << v.first << ", "
       << (v.second == kNegInfinity ? std::string("-inf") : std::to_string(v.second)) << ")\n";
  }
  for (int s = 0; s < num_states(); ++s)
    for (const auto& [code, d] : out[s]) {
      std::string sym;
      for (const auto& l : decode(code)) sym += (sym.empty() ? "" : " ") + reg.label_string(l);
      os << name(s) << " ; " << sym << " ; " << name(d) << '\n';
    }
  return os.str();
}

IntersectionAutomaton build_intersection(const ClassInput& in, int h, bool prune) {
  const auto& tasks = *in.tasks;
  const auto& agents = *in.agents;
  const int n = static_cast<int>(in.members.size());
  IntersectionAutomaton A;
  A.members = in.members;
  A.h = h;
  for (int m : in.members) A.class_atoms |= tasks[m].atoms_mask;
  A.radix.push_back(1);
  for (int m : in.members) {
    std::set<ServiceMask> img;
    const auto& am = agents[m];
    for (int a = 0; a < am.ts.num_actions(); ++a)
      if (!am.labels[a].silent) img.insert(am.labels[a].services & A.class_atoms);
    A.images.emplace_back(img.begin(), img.end());
    A.radix.push_back(A.radix.back() * static_cast<int>(img.size() + 1));
  }
  const int num_codes = A.radix.back();

  std::vector<std::vector<char>> live(n);
  for (int i = 0; i < n; ++i) {
    int m = in.members[i];
    live[i] = in.contexts ? (*in.contexts)[m].live : live_states(tasks[m].ba);
  }

  std::set<std::pair<std::vector<int>, int>> banned;
  if (in.forbidden) {
    std::vector<char> member(in.q.size(), 0);
    for (int m : in.members) member[m] = 1;
    for (const auto& f : *in.forbidden) {
      bool applies = true;
      for (std::size_t a = 0; a < in.q.size() && applies; ++a)
        if (!member[a] && f.q[a] != in.q[a]) applies = false;
      if (!applies) continue;
      std::vector<int> qv;
      int code = 0;
      for (int i = 0; i < n && applies; ++i) {
        int c = A.component_index(i, f.labels[in.members[i]]);
        if (c < 0) applies = false;
        code += c * A.radix[i];
        qv.push_back(f.q[in.members[i]]);
      }
      if (applies) banned.insert({qv, code});
    }
  }

  std::map<std::vector<int>, int> index;
  auto key_of = [](const IntersectionState& s) {
    std::vector<int> k = s.q;
    k.push_back(s.k);
    k.push_back(s.acc);
    return k;
  };
  IntersectionState init;
  for (int m : in.members) init.q.push_back(in.q[m]);
  A.states.push_back(init);
  A.out.emplace_back();
  index.emplace(key_of(init), 0);

  std::vector<std::vector<int>> succ(n);
  std::vector<int> tmp;
  for (std::size_t cur = 0; cur < A.states.size(); ++cur) {
    if (A.states[cur].depth >= h) continue;
    const IntersectionState src = A.states[cur];
    for (int code = 1; code < num_codes; ++code) {
      auto comps = A.decode(code);
      ServiceMask uni = 0;
      for (const auto& c : comps)
        if (!c.silent) uni |= c.services;
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        succ[i].clear();
        if (comps[i].silent) {
          succ[i].push_back(src.q[i]);
          continue;
        }
        const auto& task = tasks[in.members[i]];
        task.ba.successors(src.q[i], task.project(uni), tmp);
        for (int d : tmp)
          if (live[i][d]) succ[i].push_back(d);
        ok = !succ[i].empty();
      }
      if (!ok) continue;
      if (!banned.empty() && banned.count({src.q, code})) continue;
      const int kappa = (src.k - 1) % n;
      // Cartesian product over members' successor choices.
      std::vector<std::size_t> pick(n, 0);
      while (true) {
        IntersectionState nxt;
        for (int i = 0; i < n; ++i) nxt.q.push_back(succ[i][pick[i]]);
        const auto& kt = tasks[in.members[kappa]];
        bool inc = !comps[kappa].silent && kt.ba.accepting[nxt.q[kappa]];
        nxt.k = src.k + (inc ? 1 : 0);
        nxt.acc = inc;
        nxt.depth = src.depth + 1;
        auto key = key_of(nxt);
        auto it = index.find(key);
        int dst;
        if (it == index.end()) {
          dst = static_cast<int>(A.states.size());
          index.emplace(std::move(key), dst);
          A.states.push_back(std::move(nxt));
          A.out.emplace_back();
        } else {
          dst = it->second;
        }
        A.out[cur].push_back({code, dst});
        int i = n - 1;
        while (i >= 0 && ++pick[i] == succ[i].size()) pick[i--] = 0;
        if (i < 0) break;
      }
    }
  }
  A.closed = true;
  for (const auto& s : A.states)
    if (s.depth >= h) A.closed = false;

  // Distances to accepting states, then pruning of states that cannot reach one.
  const int ns = A.num_states();
  std::vector<std::vector<int>> rev(ns);
  for (int s = 0; s < ns; ++s)
    for (const auto& [c, d] : A.out[s]) rev[d].push_back(s);
  std::vector<int> dist(ns, kInfinity);
  std::deque<int> queue;
  for (int s = 0; s < ns; ++s)
    if (A.states[s].acc) {
      dist[s] = 0;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int u : rev[v])
      if (dist[u] == kInfinity) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
  }
  std::vector<int> remap(ns, -1);
  IntersectionAutomaton P = A;
  P.states.clear();
  P.out.clear();
  for (int s = 0; s < ns; ++s)
    if (!prune || s == 0 || dist[s] != kInfinity) {
      remap[s] = static_cast<int>(P.states.size());
      P.states.push_back(A.states[s]);
      P.dist.push_back(dist[s]);
    }
  P.out.resize(P.states.size());
  for (int s = 0; s < ns; ++s) {
    if (remap[s] < 0) continue;
    for (const auto& [c, d] : A.out[s])
      if (remap[d] >= 0) P.out[remap[s]].push_back({c, remap[d]});
    std::sort(P.out[remap[s]].begin(), P.out[remap[s]].end());
  }
  return P;
}

}  // namespace rhp
