#include "rhp/sim.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace rhp {

namespace {

std::vector<std::vector<int>> everyone(std::size_t n) {
  std::vector<int> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
  return {all};
}

}  // namespace

CompatibilityVerdict check_compatibility(const std::vector<Behavior>& b, const std::vector<std::vector<int>>& groups_in) {
  auto groups = groups_in.empty() ? everyone(b.size()) : groups_in;
  std::vector<int> group_of(b.size(), -1);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (int a : groups[g]) group_of[a] = static_cast<int>(g);
  // Sync start times per agent, for matching.
  std::vector<std::map<std::int64_t, int>> sync_at(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    for (int j = 0; j < b[i].size(); ++j)
      if (b[i].requests[j] == Request::Sync) sync_at[i].emplace(b[i].t_start[j], j);

  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& bi = b[i];
    for (int j = 0; j < bi.size(); ++j) {
      if (bi.t_ready[j] > bi.t_start[j] || bi.t_start[j] >= bi.t_end[j] || (j > 0 && bi.t_ready[j] != bi.t_end[j - 1]))
        return {false, static_cast<int>(i), j, "time sequence not monotone"};
      if (bi.requests[j] == Request::NoSync) {
        if (bi.t_ready[j] != bi.t_start[j]) return {false, static_cast<int>(i), j, "waiting without sync"};
        continue;
      }
      bool someone_on_time = bi.t_ready[j] == bi.t_start[j];
      for (int o : groups[group_of[i]]) {
        if (o == static_cast<int>(i)) continue;
        auto it = sync_at[o].find(bi.t_start[j]);
        if (it == sync_at[o].end()) return {false, static_cast<int>(i), j, "unmatched sync"};
        someone_on_time = someone_on_time || b[o].t_ready[it->second] == b[o].t_start[it->second];
      }
      if (!someone_on_time) return {false, static_cast<int>(i), j, "every participant waited"};
    }
  }
  return {};
}

bool equal_start_times(const std::vector<Behavior>& b, const std::vector<std::vector<int>>& groups_in) {
  auto groups = groups_in.empty() ? everyone(b.size()) : groups_in;
  for (const auto& g : groups)
    for (int a : g)
      for (int j = 0; j < std::min(b[a].size(), b[g[0]].size()); ++j)
        if (b[a].t_start[j] != b[g[0]].t_start[j]) return false;
  return true;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pending: return "pending";
    case Verdict::Violated: return "violated";
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Ongoing: return "ongoing";
  }
  return "?";
}

MonitorResult monitor_local_satisfaction(const std::vector<AgentModel>& agents, const std::vector<Behavior>& b,
                                         const TaskSpec& task, std::int64_t until) {
  MonitorResult r;
  const int i = task.owner;
  std::map<std::int64_t, ServiceMask> provided;  // dependency-set services by start instant
  for (int u : task.deps)
    for (int j = 0; j < b[u].size(); ++j) {
      const Label& l = agents[u].labels[b[u].actions[j]];
      if (!l.silent) provided[b[u].t_start[j]] |= l.services;
    }
  r.run.push_back(b[i].q.empty() ? task.ba.init : b[i].q[0]);
  for (int j = 0; j < b[i].size(); ++j) {
    if (agents[i].labels[b[i].actions[j]].silent || b[i].t_start[j] > until) continue;
    r.times.push_back(b[i].t_start[j]);
    r.word.push_back(provided[b[i].t_start[j]] & task.atoms_mask);
    r.run.push_back(b[i].q[j + 1]);
  }
  std::set<int> reach{task.ba.init};
  for (std::size_t k = 0; k < r.word.size(); ++k) {
    Symbol sym = task.project(r.word[k]);
    if (!task.ba.has_transition(r.run[k], sym, r.run[k + 1])) r.run_consistent = false;
    if (task.ba.accepting[r.run[k + 1]]) ++r.visits;
    std::set<int> next;
    for (int q : reach)
      for (int d : task.ba.successors(q, sym)) next.insert(d);
    reach = std::move(next);
  }
  if (r.word.empty()) return r;
  auto live = live_states(task.ba);
  auto universal = universal_states(task.ba);
  bool any_live = false, any_universal = false;
  for (int q : reach) {
    any_live = any_live || live[q];
    any_universal = any_universal || universal[q];
  }
  r.verdict = !any_live ? Verdict::Violated : any_universal ? Verdict::Satisfied : Verdict::Ongoing;
  return r;
}

int RunMetrics::max_h_used() const {
  int m = 0;
  for (const auto& r : rounds)
    for (const auto& c : r.classes) m = std::max(m, c.h_used);
  return m;
}

int RunMetrics::max_H_used() const {
  int m = 0;
  for (const auto& r : rounds)
    for (const auto& c : r.classes) m = std::max(m, c.H_used);
  return m;
}

int RunMetrics::max_class_size() const {
  int m = 0;
  for (const auto& r : rounds)
    for (const auto& c : r.classes) m = std::max(m, static_cast<int>(c.members.size()));
  return m;
}

int RunMetrics::max_product_states() const {
  int m = 0;
  for (const auto& r : rounds)
    for (const auto& c : r.classes) m = std::max(m, c.p_states);
  return m;
}

std::int64_t RunMetrics::completion_time(int agent, int k) const {
  const auto& s = services[agent];
  return k >= 1 && k <= static_cast<int>(s.size()) ? s[k - 1].end : -1;
}

int RunMetrics::rounds_until_service(int agent, int k) const {
  const auto& s = services[agent];
  return k >= 1 && k <= static_cast<int>(s.size()) ? s[k - 1].round : -1;
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::IterationLimit: return "iteration-limit";
    case RunStatus::Unsatisfiable: return "unsatisfiable";
  }
  return "?";
}

namespace {

using Json = nlohmann::ordered_json;

struct AgentRuntime {
  bool waiting = true;
  std::int64_t busy_until = 0;
  bool fresh_accept = false;  // the last action landed in an accepting state
  bool sync_seen = false;     // another group member requested sync since the last barrier
};

struct Snapshot {
  PlannerState st;
  std::vector<AgentRuntime> rt;
  std::vector<int> sizes;
  std::vector<int> visits;
  std::vector<std::size_t> service_counts;
  std::uint64_t draws = 0;
  std::int64_t t = 0;
  int group = 0;
};

struct HistoryEntry {
  Snapshot snap;
  bool stepped = false;
  std::vector<Label> labels;  // actions started at this barrier; silent for everybody else
  std::vector<int> q_after;
};

class Engine {
 public:
  Engine(const Scenario& sc, const SimConfig& cfg, std::ostream* log)
      : sc_(sc), cfg_(cfg), log_(log), planner_(sc, HorizonConfig{cfg.h, cfg.H, cfg.H_cap}), rng_(cfg.seed) {
    const int n = sc.num_agents();
    if (cfg.param_sync) {
      std::vector<int> prio(n);
      for (int i = 0; i < n; ++i) prio[i] = i;
      groups_ = offline_partition(sc.tasks, prio).classes;
      for (auto& g : groups_) std::sort(g.begin(), g.end());
      std::sort(groups_.begin(), groups_.end());
    } else {
      groups_ = everyone(n);
    }
    group_of_.assign(n, 0);
    for (std::size_t g = 0; g < groups_.size(); ++g)
      for (int a : groups_[g]) group_of_[a] = static_cast<int>(g);
    st_ = PlannerState::initial(sc);
    rt_.resize(n);
    beh_.resize(n);
    for (int i = 0; i < n; ++i) {
      beh_[i].states.push_back(st_.s[i]);
      beh_[i].q.push_back(st_.q[i]);
    }
    m_.visits.assign(n, 0);
    m_.services.resize(n);
  }

  RunResult run() {
    const int n = sc_.num_agents();
    for (int i = 0; i < n; ++i) emit(0, i, "sync", Json::object());
    RunResult res;
    res.status = RunStatus::IterationLimit;
    bool done = false;
    while (!done) {
      finish_actions();
      for (std::size_t g = 0; g < groups_.size() && !done; ++g) {
        bool all_waiting = true;
        for (int a : groups_[g]) all_waiting = all_waiting && rt_[a].waiting;
        if (!all_waiting) continue;
        if (stop_reached()) {
          res.status = RunStatus::Completed;
          done = true;
        } else if (m_.iterations >= cfg_.max_iters) {
          done = true;
        } else {
          int started = barrier(static_cast<int>(g));
          if (started < 0) {
            res.status = RunStatus::Unsatisfiable;
            done = true;
          }
          break;  // time may have been rewound; rescan from the current instant
        }
      }
      if (done) break;
      bool any_busy = false;
      std::int64_t next = std::numeric_limits<std::int64_t>::max();
      for (const auto& r : rt_)
        if (!r.waiting) {
          any_busy = true;
          next = std::min(next, r.busy_until);
        }
      if (any_busy && next > now_) now_ = next;
    }
    m_.end_time = now_;
    Json payload;
    payload["status"] = status_name(res.status);
    if (!report_.empty()) payload["report"] = report_;
    emit(now_, -1, "stop", payload);
    res.behaviors = beh_;
    res.final_priority = st_.priority;
    res.metrics = m_;
    res.groups = groups_;
    res.backtrack_depth = backtrack_depth_;
    res.report = report_;
    return res;
  }

 private:
  const Scenario& sc_;
  SimConfig cfg_;
  std::ostream* log_;
  Planner planner_;
  std::mt19937_64 rng_;
  std::uint64_t draws_ = 0;
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_of_;
  PlannerState st_;
  std::vector<AgentRuntime> rt_;
  std::vector<Behavior> beh_;
  RunMetrics m_;
  std::int64_t now_ = 0;
  std::vector<HistoryEntry> history_;
  std::map<std::vector<int>, int> history_index_;
  std::set<std::pair<std::vector<std::int64_t>, std::vector<int>>> tried_;
  int backtrack_depth_ = 0;
  std::string report_;

  const std::string& agent_id(int i) const { return sc_.agents[i].id; }

  void emit(std::int64_t t, int agent, const char* kind, Json payload) {
    if (!log_) return;
    Json j;
    j["v"] = 1;
    j["t"] = t;
    j["agent"] = agent < 0 ? Json(nullptr) : Json(agent_id(agent));
    j["kind"] = kind;
    j["payload"] = std::move(payload);
    *log_ << j.dump() << '\n';
  }

  Json services_json(const Label& l) const {
    if (l.silent) return nullptr;
    Json a = Json::array();
    for (int s = 0; s < sc_.services.size(); ++s)
      if (l.services >> s & 1) a.push_back(sc_.services.names[s]);
    return a;
  }

  std::int64_t draw(int agent) {
    DurationRange d = sc_.duration_of(agent);
    ++draws_;
    return d.lo + static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(d.hi - d.lo + 1));
  }

  bool stop_reached() const {
    for (int v : m_.visits)
      if (v < cfg_.stop_visits) return false;
    return true;
  }

  std::int64_t arrival(int i) const { return beh_[i].t_end.empty() ? 0 : beh_[i].t_end.back(); }

  // Appends action `act` of agent i starting now; returns the label.
  const Label& push_action(int i, int act, Request req, int q_after) {
    const auto& agent = sc_.agents[i];
    auto& b = beh_[i];
    const int from = b.states.back();
    const int to = agent.ts.step(from, act);
    const std::int64_t d = draw(i);
    b.requests.push_back(req);
    b.t_ready.push_back(arrival(i));
    b.t_start.push_back(now_);
    b.t_end.push_back(now_ + d);
    b.actions.push_back(act);
    b.states.push_back(to);
    b.q.push_back(q_after);
    st_.s[i] = to;
    st_.q[i] = q_after;
    st_.plans[i].cursor++;
    rt_[i].waiting = false;
    rt_[i].busy_until = now_ + d;
    const Label& l = agent.labels[act];
    if (!l.silent) m_.services[i].push_back({l.services, now_, now_ + d, m_.sync_rounds});
    Json p;
    p["action"] = agent.ts.action_names[act];
    p["from"] = agent.ts.state_names[from];
    p["to"] = agent.ts.state_names[to];
    p["label"] = services_json(l);
    p["end"] = now_ + d;
    emit(now_, i, "action", p);
    if (!l.silent) {
      Json sp;
      sp["services"] = services_json(l);
      emit(now_, i, "service", sp);
    }
    return l;
  }

  // Agents whose action ends now decide between waiting for a barrier and carrying on silently.
  void finish_actions() {
    const int n = sc_.num_agents();
    std::vector<int> finishing;
    for (int i = 0; i < n; ++i)
      if (!rt_[i].waiting && rt_[i].busy_until == now_) finishing.push_back(i);
    if (finishing.empty()) return;
    std::vector<char> wants(n, 0), group_syncs(groups_.size(), 0);
    for (int i : finishing) {
      const AgentPlan& ap = st_.plans[i];
      bool reason = cfg_.mode == SyncMode::Stepwise || ap.exhausted() || rt_[i].fresh_accept || rt_[i].sync_seen ||
                    !sc_.agents[i].labels[ap.next_action()].silent;
      wants[i] = reason;
      if (reason) group_syncs[group_of_[i]] = 1;
    }
    // A request sent at this instant reaches every group member finishing at the same instant.
    for (int i : finishing) {
      rt_[i].fresh_accept = false;
      if (wants[i] || group_syncs[group_of_[i]]) {
        rt_[i].waiting = true;
        emit(now_, i, "sync", Json::object());
        for (int o : groups_[group_of_[i]])
          if (o != i) rt_[o].sync_seen = true;
      }
    }
    for (int i : finishing) {
      if (rt_[i].waiting) continue;
      ++m_.nosync;
      emit(now_, i, "nosync", Json::object());
      push_action(i, st_.plans[i].next_action(), Request::NoSync, st_.q[i]);
    }
  }

  Snapshot snapshot(int group) const {
    Snapshot s;
    s.st = st_;
    s.rt = rt_;
    for (const auto& b : beh_) s.sizes.push_back(b.size());
    s.visits = m_.visits;
    for (const auto& sv : m_.services) s.service_counts.push_back(sv.size());
    s.draws = draws_;
    s.t = now_;
    s.group = group;
    return s;
  }

  void restore(const Snapshot& s) {
    st_ = s.st;
    rt_ = s.rt;
    for (std::size_t i = 0; i < beh_.size(); ++i) {
      auto& b = beh_[i];
      const std::size_t k = s.sizes[i];
      b.actions.resize(k);
      b.requests.resize(k);
      b.t_ready.resize(k);
      b.t_start.resize(k);
      b.t_end.resize(k);
      b.states.resize(k + 1);
      b.q.resize(k + 1);
      m_.services[i].resize(s.service_counts[i]);
    }
    m_.visits = s.visits;
    rng_.seed(cfg_.seed);
    rng_.discard(s.draws);
    draws_ = s.draws;
    now_ = s.t;
  }

  // Barrier states that plan identically: TS states, automaton states and priority order.
  static std::vector<int> history_key(const PlannerState& st) {
    std::vector<int> k = st.s;
    k.insert(k.end(), st.q.begin(), st.q.end());
    k.insert(k.end(), st.priority.begin(), st.priority.end());
    return k;
  }

  void record_history(int group, bool elide = true) {
    auto key = history_key(st_);
    auto it = history_index_.find(key);
    if (elide && it != history_index_.end()) {
      // Same system state as an earlier barrier: drop the cycle in between.
      const int keep = it->second;
      for (std::size_t k = keep + 1; k < history_.size(); ++k)
        history_index_.erase(history_key(history_[k].snap.st));
      history_.resize(keep);
    }
    HistoryEntry e;
    e.snap = snapshot(group);
    history_index_[key] = static_cast<int>(history_.size());
    history_.push_back(std::move(e));
  }

  void truncate_history(std::size_t size) {
    for (std::size_t k = size; k < history_.size(); ++k) history_index_.erase(history_key(history_[k].snap.st));
    history_.resize(size);
  }

  bool plan_round(int group) {
    auto t0 = std::chrono::steady_clock::now();
    auto out = planner_.plan(st_, &groups_[group]);
    m_.wall_ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    ++m_.iterations;
    m_.rounds.push_back({now_, out.classes, out.feasible});
    for (const auto& c : out.classes) {
      Json p;
      Json mem = Json::array();
      for (int a : c.members) mem.push_back(agent_id(a));
      p["members"] = mem;
      p["h"] = c.h_used;
      p["H"] = c.H_used;
      p["automaton_states"] = c.a_states;
      p["automaton_edges"] = c.a_edges;
      p["product_states"] = c.p_states;
      if (c.feasible) {
        p["value"] = {c.best.first, c.best.second};
        p["vmax"] = {c.vmax.first, c.vmax.second};
        p["replaced"] = c.replaced;
        p["path"] = c.path_length;
      } else {
        p["failure"] = c.failure;
      }
      emit(now_, -1, "plan", p);
    }
    return out.feasible;
  }

  // Starts the first planned action of every member of `group` at the current instant.
  void start_actions(int group) {
    const int n = sc_.num_agents();
    const auto& members = groups_[group];
    if (cfg_.mode == SyncMode::Stepwise)
      for (int a : members)
        if (beh_[a].size() != beh_[members[0]].size()) throw std::logic_error("stepwise barrier out of step");
    for (int a : members) rt_[a].sync_seen = false;
    ++m_.sync_rounds;

    HistoryEntry& e = history_.back();
    e.stepped = true;
    e.labels.assign(n, Label::silence());
    ServiceMask uni = 0;
    for (int a : members) {
      const Label& l = sc_.agents[a].labels[st_.plans[a].next_action()];
      e.labels[a] = l;
      if (!l.silent) uni |= l.services;
    }
    std::vector<int> q_after = st_.q;
    for (int a : members) {
      if (e.labels[a].silent) continue;
      const auto& task = sc_.tasks[a];
      auto succ = task.ba.successors(st_.q[a], task.project(uni));
      const AgentPlan& ap = st_.plans[a];
      const int planned = ap.frag.q[ap.cursor + 1];
      const auto& live = planner_.contexts()[a].live;
      int pick = -1;
      if (std::find(succ.begin(), succ.end(), planned) != succ.end()) pick = planned;
      for (std::size_t k = 0; k < succ.size() && pick < 0; ++k)
        if (live[succ[k]]) pick = succ[k];
      if (pick < 0) pick = succ.front();  // complete automaton: never empty
      q_after[a] = pick;
    }
    e.q_after = q_after;

    bool accepted = false;
    std::vector<int> acceptors;
    for (int a : st_.priority)
      if (group_of_[a] == group && !e.labels[a].silent && sc_.tasks[a].ba.accepting[q_after[a]]) acceptors.push_back(a);
    for (int a : members) push_action(a, st_.plans[a].next_action(), Request::Sync, q_after[a]);
    for (int a : acceptors) {
      ++m_.visits[a];
      rt_[a].fresh_accept = true;
      st_.demote(a);
      accepted = true;
      Json p;
      p["state"] = sc_.tasks[a].ba.state_names[q_after[a]];
      p["visits"] = m_.visits[a];
      emit(now_, a, "accept", p);
    }
    if (accepted) st_.reset_vmax();
  }

  // Returns the group whose actions were started, or -1 when the run is unsatisfiable.
  int barrier(int group) {
    record_history(group);
    if (plan_round(group)) {
      start_actions(group);
      return group;
    }
    int g = backtrack();
    if (g >= 0) start_actions(g);
    return g;
  }

  // Alternatives are remembered per barrier state and step rather than per history entry, so a
  // run that loops back to an earlier barrier does not retry them.
  static std::vector<std::int64_t> step_key(const HistoryEntry& e) {
    std::vector<std::int64_t> k;
    for (int x : history_key(e.snap.st)) k.push_back(x);
    for (const auto& l : e.labels) k.push_back(l.silent ? -1 : static_cast<std::int64_t>(l.services));
    return k;
  }

  std::vector<std::vector<int>> alternatives(const HistoryEntry& e) const {
    const int n = sc_.num_agents();
    ServiceMask uni = 0;
    for (const auto& l : e.labels)
      if (!l.silent) uni |= l.services;
    std::vector<std::vector<int>> options(n);
    for (int a = 0; a < n; ++a) {
      if (e.labels[a].silent) {
        options[a] = {e.q_after[a]};
        continue;
      }
      const auto& task = sc_.tasks[a];
      const auto& live = planner_.contexts()[a].live;
      for (int d : task.ba.successors(e.snap.st.q[a], task.project(uni)))
        if (live[d]) options[a].push_back(d);
      if (options[a].empty()) return {};
    }
    std::vector<std::vector<int>> out;
    std::vector<std::size_t> pick(n, 0);
    while (out.size() < 64) {
      std::vector<int> v(n);
      for (int a = 0; a < n; ++a) v[a] = options[a][pick[a]];
      if (v != e.q_after && !tried_.count({step_key(e), v})) out.push_back(v);
      int a = n - 1;
      while (a >= 0 && ++pick[a] == options[a].size()) pick[a--] = 0;
      if (a < 0) break;
    }
    return out;
  }

  void log_backtrack(int depth, const char* how) {
    Json p;
    p["depth"] = depth;
    p["kind"] = how;
    emit(now_, -1, "backtrack", p);
  }

  // Restored fragments may contain the step just ruled out; force fresh plans.
  void drop_plans(int group) {
    for (int a = 0; a < sc_.num_agents(); ++a)
      if (group_of_[a] == group) st_.plans[a] = AgentPlan{};
  }

  int backtrack() {
    const int current = static_cast<int>(history_.size()) - 1;
    for (int k = current - 1; k >= 0; --k) {
      const int depth = current - k;
      backtrack_depth_ = depth;
      // Another successor vector for the step taken at barrier k.
      for (const auto& alt : alternatives(history_[k])) {
        tried_.insert({step_key(history_[k]), alt});
        const std::vector<int> orig = history_[k].q_after;
        const std::vector<int> base = history_[k].snap.sizes;
        truncate_history(k + 2);
        restore(history_[k + 1].snap);
        for (std::size_t a = 0; a < alt.size(); ++a) {
          if (alt[a] == orig[a]) continue;
          st_.q[a] = alt[a];
          for (std::size_t j = base[a] + 1; j < beh_[a].q.size(); ++j) beh_[a].q[j] = alt[a];
          const auto& acc = sc_.tasks[a].ba.accepting;
          m_.visits[a] += (acc[alt[a]] ? 1 : 0) - (acc[orig[a]] ? 1 : 0);
        }
        history_[k].q_after = alt;
        truncate_history(k + 1);
        ++m_.backtracks;
        log_backtrack(depth, "alternative");
        record_history(history_[k].snap.group, false);
        drop_plans(history_.back().snap.group);
        if (plan_round(history_.back().snap.group)) return history_.back().snap.group;
      }
      // Forbid the joint step taken at barrier k and replan from there. All-silent steps move
      // no automaton, so forbidding them would replay the same plan.
      HistoryEntry& e = history_[k];
      bool silent = true;
      for (const auto& l : e.labels) silent = silent && l.silent;
      if (silent) continue;
      planner_.forbidden().push_back({e.snap.st.q, e.labels});
      truncate_history(k + 1);
      restore(history_[k].snap);
      history_[k].stepped = false;
      drop_plans(history_[k].snap.group);
      ++m_.backtracks;
      log_backtrack(depth, "forbid");
      if (plan_round(history_[k].snap.group)) return history_[k].snap.group;
    }
    backtrack_depth_ = current;
    report_ = "unsatisfiable: backtracking exhausted the execution history (depth " + std::to_string(current) + ")";
    return -1;
  }
};

}  // namespace

RunResult simulate(const Scenario& sc, const SimConfig& cfg, std::ostream* log) {
  Engine e(sc, cfg, log);
  return e.run();
}

}  // namespace rhp
