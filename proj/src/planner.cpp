#include "rhp/planner.hpp"

#include <algorithm>

namespace rhp {

HExtension extend_h_until_accepting(const ClassInput& in, int h0) {
  HExtension r;
  for (int h = std::max(h0, 1);; ++h) {
    r.a = build_intersection(in, h);
    r.h_used = h;
    if (r.a.has_accepting()) {
      r.feasible = true;
      return r;
    }
    if (r.a.closed) return r;
  }
}

PExtension extend_H_until_progressive(const IntersectionAutomaton& a, const std::vector<AgentModel>& agents,
                                      const std::vector<int>& s0, int H0, int cap) {
  PExtension r;
  int H = std::max(H0, 1);
  r.p = build_product(a, agents, s0, H);
  while (true) {
    r.H_used = H;
    r.best = find_max_progressive(r.p, a);
    if (r.best || r.p.closed() || H >= cap) return r;
    grow_product(r.p, a, agents, ++H);
  }
}

PlannerState PlannerState::initial(const Scenario& sc) {
  PlannerState st;
  for (int i = 0; i < sc.num_agents(); ++i) {
    st.priority.push_back(i);
    st.s.push_back(sc.agents[i].ts.init);
    st.q.push_back(sc.tasks[i].ba.init);
  }
  st.plans.resize(sc.num_agents());
  return st;
}

void PlannerState::demote(int agent) {
  auto it = std::find(priority.begin(), priority.end(), agent);
  priority.erase(it);
  priority.push_back(agent);
}

Planner::Planner(const Scenario& sc, HorizonConfig cfg) : sc_(sc), cfg_(cfg) {
  for (const auto& t : sc.tasks) contexts_.push_back(make_task_context(t, sc.agents));
}

PlanOutcome Planner::plan(PlannerState& st, const std::vector<int>* group) const {
  int hp = cfg_.h;
  Partition part = dynamic_partition(sc_.tasks, sc_.agents, st.q, hp, st.priority);
  while (true) {
    PlannerState trial = st;
    PlanOutcome out = plan_with(trial, group, part);
    out.partition_h = hp;
    if (out.feasible || out.classes[out.failed_class].failure != "no accepting state") {
      st = std::move(trial);
      return out;
    }
    // The extension may have looked further ahead than the partition did. If the failing
    // members couple with other agents within that longer horizon, plan again with them.
    const auto& failed = out.classes[out.failed_class];
    bool merged = false;
    for (int h = hp + 1; h <= failed.h_used && !merged; ++h) {
      Partition wider = dynamic_partition(sc_.tasks, sc_.agents, st.q, h, st.priority);
      merged = wider.classes[wider.class_of(failed.members[0])].size() > failed.members.size();
      if (merged) {
        hp = h;
        part = std::move(wider);
      }
    }
    if (!merged) {
      st = std::move(trial);
      return out;
    }
  }
}

PlanOutcome Planner::plan_with(PlannerState& st, const std::vector<int>* group, const Partition& partition) const {
  PlanOutcome out;
  out.partition = partition;
  std::vector<char> in_group(sc_.num_agents(), group ? 0 : 1);
  if (group)
    for (int a : *group) in_group[a] = 1;

  std::map<std::vector<int>, Value> vmax;
  // Entries of classes outside the group survive untouched.
  for (const auto& [key, v] : st.vmax)
    if (!in_group[key[0]]) vmax[key] = v;

  for (const auto& members : out.partition.classes) {
    if (!in_group[members[0]]) continue;
    ClassReport rep;
    rep.members = members;
    std::vector<int> key = members;
    std::sort(key.begin(), key.end());
    auto old = st.vmax.find(key);
    rep.vmax = old == st.vmax.end() ? Value{0, 0} : old->second;

    ClassInput in;
    in.members = members;
    in.tasks = &sc_.tasks;
    in.agents = &sc_.agents;
    in.contexts = &contexts_;
    in.q = st.q;
    in.forbidden = &forbidden_;
    auto hx = extend_h_until_accepting(in, cfg_.h);
    rep.h_used = hx.h_used;
    rep.a_states = hx.a.num_states();
    rep.a_edges = hx.a.num_edges();
    if (!hx.feasible) {
      rep.feasible = false;
      rep.failure = "no accepting state";
      out.feasible = false;
      out.failed_class = static_cast<int>(out.classes.size());
      out.classes.push_back(rep);
      return out;
    }

    std::vector<int> s0;
    int biggest = 1;
    for (int m : members) {
      s0.push_back(st.s[m]);
      biggest = std::max(biggest, sc_.agents[m].ts.num_states());
    }
    int cap = cfg_.H_cap > 0 ? cfg_.H_cap : biggest * (hx.h_used + 1);
    auto px = extend_H_until_progressive(hx.a, sc_.agents, s0, cfg_.H, std::max(cap, cfg_.H));
    rep.H_used = px.H_used;
    rep.p_states = px.p.num_states();
    if (!px.best) {
      rep.feasible = false;
      rep.failure = "no progressive state";
      out.feasible = false;
      out.failed_class = static_cast<int>(out.classes.size());
      out.classes.push_back(rep);
      return out;
    }
    rep.best = hx.a.value(px.p.states[*px.best].qa);

    // The previous joint fragment is kept while nothing better shows up and it is still followable.
    bool keep = rep.best <= rep.vmax;
    const AgentPlan& lead = st.plans[members[0]];
    for (int m : members) {
      const AgentPlan& ap = st.plans[m];
      keep = keep && ap.plan_id >= 0 && ap.plan_id == lead.plan_id && ap.cursor == lead.cursor && !ap.exhausted() &&
             ap.frag.states[ap.cursor] == st.s[m] && ap.frag.q[ap.cursor] == st.q[m];
    }
    if (keep) {
      vmax[key] = rep.vmax;
      rep.path_length = lead.frag.actions.size() - lead.cursor;
    } else {
      auto f = project(px.p, hx.a, shortest_path_to(px.p, *px.best));
      const int id = st.next_plan_id++;
      for (std::size_t i = 0; i < members.size(); ++i) st.plans[members[i]] = AgentPlan{id, f.agents[i], 0};
      vmax[key] = rep.best;
      rep.replaced = true;
      rep.path_length = f.length();
    }
    out.classes.push_back(rep);
  }
  st.vmax = std::move(vmax);
  return out;
}

}  // namespace rhp
