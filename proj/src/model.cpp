#include "rhp/model.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "rhp/toml.hpp"

namespace rhp {

// ---- services -----------------------------------------------------------------------------

int ServiceRegistry::add(const std::string& name, int agent) {
  auto it = index.find(name);
  if (it != index.end())
    throw ModelError("alphabet overlap: service '" + name + "' is declared by more than one agent");
  if (size() >= kMaxServices) throw ModelError("too many services (max 64)");
  int id = size();
  names.push_back(name);
  owner.push_back(agent);
  index.emplace(name, id);
  return id;
}

int ServiceRegistry::find(const std::string& name) const {
  auto it = index.find(name);
  return it == index.end() ? -1 : it->second;
}

ServiceMask ServiceRegistry::mask_of(const std::vector<std::string>& ns) const {
  ServiceMask m = 0;
  for (const auto& n : ns) {
    int id = find(n);
    if (id < 0) throw ModelError("unknown service '" + n + "'");
    m |= ServiceMask{1} << id;
  }
  return m;
}

std::string ServiceRegistry::set_string(ServiceMask m) const {
  std::string r = "{";
  bool first = true;
  for (int i = 0; i < size(); ++i)
    if (m >> i & 1) {
      if (!first) r += ",";
      r += names[i];
      first = false;
    }
  return r + "}";
}

std::string ServiceRegistry::label_string(const Label& l) const {
  return l.silent ? "eps" : set_string(l.services);
}

// ---- transition systems ---------------------------------------------------------------------

int TransitionSystem::step(int s, int action) const {
  for (const auto& [a, d] : out[s])
    if (a == action) return d;
  return -1;
}

int TransitionSystem::state_index(const std::string& name) const {
  for (int i = 0; i < num_states(); ++i)
    if (state_names[i] == name) return i;
  return -1;
}

int TransitionSystem::action_index(const std::string& name) const {
  for (int i = 0; i < num_actions(); ++i)
    if (action_names[i] == name) return i;
  return -1;
}

std::vector<int> TransitionSystem::distances_from(int s) const {
  std::vector<int> d(num_states(), -1);
  std::deque<int> q{s};
  d[s] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (const auto& [a, w] : out[v])
      if (d[w] < 0) {
        d[w] = d[v] + 1;
        q.push_back(w);
      }
  }
  return d;
}

bool GridSpec::blocked(int x1, int y1, int x2, int y2) const {
  for (const auto& w : walls)
    if ((w[0] == x1 && w[1] == y1 && w[2] == x2 && w[3] == y2) ||
        (w[0] == x2 && w[1] == y2 && w[2] == x1 && w[3] == y1))
      return true;
  if (x1 == x2) {
    int upper = std::max(y1, y2);
    for (const auto& w : hwalls)
      if (w[0] == upper && x1 >= w[1] && x1 <= w[2]) return true;
  }
  if (y1 == y2) {
    int right = std::max(x1, x2);
    for (const auto& w : vwalls)
      if (w[0] == right && y1 >= w[1] && y1 <= w[2]) return true;
  }
  return false;
}

AgentModel build_grid_world(const std::string& id, int index, const GridSpec& g, const ServiceRegistry& reg) {
  if (g.width < 1 || g.height < 1) throw ModelError("grid of agent '" + id + "' must be at least 1x1");
  auto inside = [&](int x, int y) { return x >= 0 && y >= 0 && x < g.width && y < g.height; };
  if (!inside(g.start_x, g.start_y)) throw ModelError("grid start of agent '" + id + "' is outside the grid");
  AgentModel m;
  m.id = id;
  m.index = index;
  m.grid = g;
  auto& ts = m.ts;
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) ts.state_names.push_back(std::to_string(x) + "," + std::to_string(y));
  ts.init = g.cell(g.start_x, g.start_y);
  ts.out.resize(ts.state_names.size());
  ts.action_names = {"stay", "N", "S", "E", "W"};
  m.labels.assign(5, Label::silence());
  const int dx[] = {0, 0, 0, 1, -1}, dy[] = {0, 1, -1, 0, 0};
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) {
      int s = g.cell(x, y);
      ts.out[s].push_back({0, s});
      for (int a = 1; a < 5; ++a) {
        int nx = x + dx[a], ny = y + dy[a];
        if (inside(nx, ny) && !g.blocked(x, y, nx, ny)) ts.out[s].push_back({a, g.cell(nx, ny)});
      }
    }
  std::map<ServiceMask, int> action_of;
  for (const auto& sv : g.services) {
    if (!inside(sv.x, sv.y))
      throw ModelError("service cell (" + std::to_string(sv.x) + "," + std::to_string(sv.y) + ") of agent '" + id +
                       "' is outside the grid");
    ServiceMask mask = reg.mask_of(sv.services);
    auto it = action_of.find(mask);
    if (it == action_of.end()) {
      std::string name;
      for (const auto& n : sv.services) name += (name.empty() ? "" : "+") + n;
      if (name.empty()) name = "empty";
      it = action_of.emplace(mask, ts.num_actions()).first;
      ts.action_names.push_back(name);
      m.labels.push_back(Label::of(mask));
    }
    int s = g.cell(sv.x, sv.y);
    if (ts.step(s, it->second) < 0) ts.out[s].push_back({it->second, s});
  }
  for (auto& o : ts.out) std::sort(o.begin(), o.end());
  return m;
}

void validate_agent(const AgentModel& m, const ServiceRegistry& reg) {
  const auto& ts = m.ts;
  const std::string who = "agent '" + m.id + "': ";
  if (ts.num_states() == 0) throw ModelError(who + "transition system has no states");
  for (int s = 0; s < ts.num_states(); ++s) {
    std::set<int> seen;
    for (const auto& [a, d] : ts.out[s])
      if (!seen.insert(a).second)
        throw ModelError(who + "non-determinism: action '" + ts.action_names[a] + "' has several successors in state '" +
                         ts.state_names[s] + "'");
    bool loop = false;
    for (const auto& [a, d] : ts.out[s]) loop = loop || (d == s && m.labels[a].silent);
    if (!loop) throw ModelError(who + "missing silent self-loop in state '" + ts.state_names[s] + "'");
  }
  // Mutual reachability: everything reachable from state 0 and state 0 reachable from everything.
  std::vector<std::vector<int>> fwd(ts.num_states()), rev(ts.num_states());
  for (int s = 0; s < ts.num_states(); ++s)
    for (const auto& [a, d] : ts.out[s]) {
      fwd[s].push_back(d);
      rev[d].push_back(s);
    }
  for (const auto* adj : {&fwd, &rev}) {
    std::vector<char> seen(ts.num_states(), 0);
    std::deque<int> q{0};
    seen[0] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int w : (*adj)[v])
        if (!seen[w]) {
          seen[w] = 1;
          q.push_back(w);
        }
    }
    for (int s = 0; s < ts.num_states(); ++s)
      if (!seen[s])
        throw ModelError(who + "unreachability: states '" + ts.state_names[0] + "' and '" + ts.state_names[s] +
                         "' are not mutually reachable");
  }
  for (int a = 0; a < ts.num_actions(); ++a) {
    const Label& l = m.labels[a];
    if (!l.silent && (l.services & ~m.service_mask))
      throw ModelError(who + "action '" + ts.action_names[a] + "' uses services " +
                       reg.set_string(l.services & ~m.service_mask) + " of another agent");
  }
}

std::vector<Label> service_set_sequence(const AgentModel& m, const std::vector<int>& states,
                                        const std::vector<int>& actions) {
  if (states.size() != actions.size() + 1) throw ModelError("trace fragment needs one more state than actions");
  std::vector<Label> v;
  for (std::size_t j = 0; j < actions.size(); ++j) {
    if (m.ts.step(states[j], actions[j]) != states[j + 1])
      throw ModelError("trace fragment inconsistent with the transition function at step " + std::to_string(j));
    v.push_back(m.labels[actions[j]]);
  }
  return v;
}

std::vector<ServiceMask> nonsilent_word(const std::vector<Label>& v) {
  std::vector<ServiceMask> w;
  for (const auto& l : v)
    if (!l.silent) w.push_back(l.services);
  return w;
}

// ---- tasks --------------------------------------------------------------------------------

Symbol TaskSpec::project(ServiceMask m) const {
  Symbol s = 0;
  for (std::size_t i = 0; i < prop_service.size(); ++i)
    if (m >> prop_service[i] & 1) s |= Symbol{1} << i;
  return s;
}

ServiceMask TaskSpec::unproject(Symbol s) const {
  ServiceMask m = 0;
  for (std::size_t i = 0; i < prop_service.size(); ++i)
    if (s >> i & 1) m |= ServiceMask{1} << prop_service[i];
  return m;
}

TaskSpec compile_task(int owner, const std::string& formula, const ServiceRegistry& reg,
                      const std::vector<AgentModel>& agents, const std::optional<std::vector<int>>& deps_override) {
  TaskSpec t;
  t.owner = owner;
  t.formula_text = formula;
  std::set<std::string> alphabet(reg.names.begin(), reg.names.end());
  if (alphabet.empty()) alphabet.insert("");  // an empty set would accept any identifier
  t.formula = parse_ltl(formula, alphabet);
  std::set<int> ids;
  for (const auto& a : atoms_of(t.formula)) ids.insert(reg.find(a));
  std::set<int> deps{owner};
  std::vector<std::string> props;
  for (int id : ids) {
    t.prop_service.push_back(id);
    props.push_back(reg.names[id]);
    t.atoms_mask |= ServiceMask{1} << id;
    deps.insert(reg.owner[id]);
  }
  if (deps_override) {
    std::set<int> o(deps_override->begin(), deps_override->end());
    o.insert(owner);
    for (int d : deps)
      if (!o.count(d))
        throw ModelError("dependency override of agent '" + agents[owner].id + "' must include agent '" + agents[d].id +
                         "' whose services occur in the formula");
    deps = o;
    t.deps_overridden = true;
  }
  t.deps.assign(deps.begin(), deps.end());
  t.ba = ltl_to_buchi(t.formula, props);
  return t;
}

// ---- scenario documents -------------------------------------------------------------------

namespace {

using nlohmann::ordered_json;

[[noreturn]] void schema(const std::string& where, const std::string& msg) {
  throw ScenarioError("schema violation in " + where + ": " + msg);
}

const ordered_json& need(const ordered_json& t, const std::string& key, const std::string& where) {
  if (!t.contains(key)) schema(where, "missing '" + key + "'");
  return t.at(key);
}

std::int64_t as_int(const ordered_json& v, const std::string& where) {
  if (!v.is_number_integer()) schema(where, "expected an integer");
  return v.get<std::int64_t>();
}

std::string as_string(const ordered_json& v, const std::string& where) {
  if (!v.is_string()) schema(where, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> as_strings(const ordered_json& v, const std::string& where) {
  if (!v.is_array()) schema(where, "expected an array of strings");
  std::vector<std::string> r;
  for (const auto& x : v) r.push_back(as_string(x, where));
  return r;
}

template <std::size_t N>
std::vector<std::array<int, N>> int_tuples(const ordered_json& v, const std::string& where) {
  if (!v.is_array()) schema(where, "expected an array");
  std::vector<std::array<int, N>> r;
  for (const auto& row : v) {
    if (!row.is_array() || row.size() != N) schema(where, "expected rows of " + std::to_string(N) + " integers");
    std::array<int, N> a{};
    for (std::size_t i = 0; i < N; ++i) a[i] = static_cast<int>(as_int(row[i], where));
    r.push_back(a);
  }
  return r;
}

DurationRange as_duration(const ordered_json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) schema(where, "duration must be [lo, hi]");
  DurationRange d{as_int(v[0], where), as_int(v[1], where)};
  if (d.lo < 1 || d.hi < d.lo) schema(where, "duration range must satisfy 1 <= lo <= hi");
  return d;
}

void check_keys(const ordered_json& t, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : t.items())
    if (!allowed.count(k)) schema(where, "unknown key '" + k + "'");
}

GridSpec parse_grid(const ordered_json& g, const std::string& where) {
  check_keys(g, {"width", "height", "start", "walls", "hwalls", "vwalls", "services"}, where);
  GridSpec spec;
  spec.width = static_cast<int>(as_int(need(g, "width", where), where + ".width"));
  spec.height = static_cast<int>(as_int(need(g, "height", where), where + ".height"));
  const auto& st = need(g, "start", where);
  if (!st.is_array() || st.size() != 2) schema(where, "start must be [x, y]");
  spec.start_x = static_cast<int>(as_int(st[0], where));
  spec.start_y = static_cast<int>(as_int(st[1], where));
  if (g.contains("walls")) spec.walls = int_tuples<4>(g["walls"], where + ".walls");
  if (g.contains("hwalls")) spec.hwalls = int_tuples<3>(g["hwalls"], where + ".hwalls");
  if (g.contains("vwalls")) spec.vwalls = int_tuples<3>(g["vwalls"], where + ".vwalls");
  for (const auto& w : spec.walls)
    if (std::abs(w[0] - w[2]) + std::abs(w[1] - w[3]) != 1) schema(where + ".walls", "wall must separate adjacent cells");
  if (g.contains("services")) {
    const auto& sv = g["services"];
    if (!sv.is_array()) schema(where + ".services", "expected an array");
    for (const auto& row : sv) {
      if (!row.is_array() || row.size() != 3) schema(where + ".services", "expected [x, y, name] rows");
      GridService s;
      s.x = static_cast<int>(as_int(row[0], where));
      s.y = static_cast<int>(as_int(row[1], where));
      if (row[2].is_string()) s.services = {row[2].get<std::string>()};
      else s.services = as_strings(row[2], where + ".services");
      spec.services.push_back(std::move(s));
    }
  }
  return spec;
}

Label parse_label(const std::string& text, const ServiceRegistry& reg, const std::string& where) {
  if (text == "eps") return Label::silence();
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    schema(where, "label must be \"eps\" or \"{a,b}\", got \"" + text + "\"");
  std::vector<std::string> names;
  std::istringstream is(text.substr(1, text.size() - 2));
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(' '));
    tok.erase(tok.find_last_not_of(' ') + 1);
    if (!tok.empty()) names.push_back(tok);
  }
  try {
    return Label::of(reg.mask_of(names));
  } catch (const ModelError& e) {
    schema(where, e.what());
  }
}

AgentModel parse_explicit(const std::string& id, int index, const ordered_json& t, const ServiceRegistry& reg,
                          const std::string& where) {
  AgentModel m;
  m.id = id;
  m.index = index;
  auto& ts = m.ts;
  ts.state_names = as_strings(need(t, "states", where), where + ".states");
  if (ts.state_names.empty()) schema(where, "states must be nonempty");
  for (std::size_t i = 0; i < ts.state_names.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (ts.state_names[i] == ts.state_names[j]) schema(where, "duplicate state '" + ts.state_names[i] + "'");
  ts.init = ts.state_index(as_string(need(t, "init", where), where + ".init"));
  if (ts.init < 0) schema(where, "init is not a declared state");
  ts.out.resize(ts.state_names.size());
  if (t.contains("actions")) {
    ts.action_names = as_strings(t["actions"], where + ".actions");
    m.labels.assign(ts.action_names.size(), Label{});
  }
  std::vector<char> labelled(ts.action_names.size(), 0);
  const auto& tr = need(t, "transitions", where);
  if (!tr.is_array()) schema(where, "transitions must be an array");
  for (const auto& row : tr) {
    const std::string w = where + ".transitions";
    if (!row.is_array() || row.size() != 4) schema(w, "expected [src, action, dst, label] rows");
    int src = ts.state_index(as_string(row[0], w)), dst = ts.state_index(as_string(row[2], w));
    if (src < 0 || dst < 0) schema(w, "unknown state in transition");
    std::string an = as_string(row[1], w);
    Label lab = parse_label(as_string(row[3], w), reg, w);
    int a = ts.action_index(an);
    if (a < 0) {
      a = ts.num_actions();
      ts.action_names.push_back(an);
      m.labels.push_back(lab);
      labelled.push_back(1);
    } else if (!labelled[a]) {
      m.labels[a] = lab;
      labelled[a] = 1;
    } else if (!(m.labels[a] == lab)) {
      schema(w, "action '" + an + "' carries two different labels");
    }
    ts.out[src].push_back({a, dst});
  }
  for (std::size_t a = 0; a < labelled.size(); ++a)
    if (!labelled[a]) schema(where, "action '" + ts.action_names[a] + "' has no transitions");
  for (auto& o : ts.out) std::stable_sort(o.begin(), o.end(), [](auto& x, auto& y) { return x.first < y.first; });
  return m;
}

const char* mode_name(SyncMode m) { return m == SyncMode::Stepwise ? "stepwise" : "event"; }

std::string quote(const std::string& s) {
  std::string r = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r + "\"";
}

std::string quoted_list(const std::vector<std::string>& v) {
  std::string r = "[";
  for (std::size_t i = 0; i < v.size(); ++i) r += (i ? ", " : "") + quote(v[i]);
  return r + "]";
}

}  // namespace

SyncMode parse_mode(const std::string& s) {
  if (s == "stepwise") return SyncMode::Stepwise;
  if (s == "event") return SyncMode::Event;
  throw ScenarioError("unknown sync mode '" + s + "' (expected stepwise or event)");
}

Scenario load_scenario(const std::string& text) {
  ordered_json doc = parse_toml(text);
  check_keys(doc, {"config", "agent", "task"}, "document");
  Scenario sc;
  if (doc.contains("config")) {
    const auto& c = doc["config"];
    const std::string w = "[config]";
    check_keys(c, {"h", "H", "H_cap", "seed", "mode", "stop_visits", "max_iters", "duration", "param_sync"}, w);
    auto& cfg = sc.config;
    if (c.contains("h")) cfg.h = static_cast<int>(as_int(c["h"], w + ".h"));
    if (c.contains("H")) cfg.H = static_cast<int>(as_int(c["H"], w + ".H"));
    if (c.contains("H_cap")) cfg.H_cap = static_cast<int>(as_int(c["H_cap"], w + ".H_cap"));
    if (c.contains("seed")) cfg.seed = static_cast<std::uint64_t>(as_int(c["seed"], w + ".seed"));
    if (c.contains("mode")) {
      try {
        cfg.mode = parse_mode(as_string(c["mode"], w + ".mode"));
      } catch (const ScenarioError& e) {
        schema(w, e.what());
      }
    }
    if (c.contains("stop_visits")) cfg.stop_visits = static_cast<int>(as_int(c["stop_visits"], w));
    if (c.contains("max_iters")) cfg.max_iters = static_cast<int>(as_int(c["max_iters"], w));
    if (c.contains("duration")) cfg.duration = as_duration(c["duration"], w + ".duration");
    if (c.contains("param_sync")) {
      if (!c["param_sync"].is_boolean()) schema(w, "param_sync must be a boolean");
      cfg.param_sync = c["param_sync"].get<bool>();
    }
    if (cfg.h < 1 || cfg.H < 1) schema(w, "horizons must be >= 1");
    if (cfg.H_cap < 0 || cfg.stop_visits < 0 || cfg.max_iters < 0) schema(w, "negative limit");
  }
  if (!doc.contains("agent") || !doc["agent"].is_object() || doc["agent"].empty())
    schema("document", "at least one [agent.<id>] table is required");
  // Services first, so labels and formulas can refer to any agent's services.
  std::vector<std::string> ids;
  for (const auto& [id, t] : doc["agent"].items()) {
    const std::string w = "[agent." + id + "]";
    if (!t.is_object()) schema(w, "expected a table");
    int idx = static_cast<int>(ids.size());
    ids.push_back(id);
    auto names = t.contains("services") ? as_strings(t["services"], w + ".services") : std::vector<std::string>{};
    for (const auto& n : names) {
      try {
        sc.services.add(n, idx);
      } catch (const ModelError& e) {
        throw ScenarioError(e.what());
      }
    }
    sc.declared_services.push_back(names);
  }
  for (std::size_t idx = 0; idx < ids.size(); ++idx) {
    const auto& id = ids[idx];
    const auto& t = doc["agent"][id];
    const std::string w = "[agent." + id + "]";
    check_keys(t, {"services", "duration", "grid", "states", "init", "actions", "transitions"}, w);
    AgentModel m;
    try {
      if (t.contains("grid")) {
        if (t.contains("states") || t.contains("transitions")) schema(w, "give either a grid or an explicit TS");
        m = build_grid_world(id, static_cast<int>(idx), parse_grid(t["grid"], "[agent." + id + ".grid]"), sc.services);
      } else {
        m = parse_explicit(id, static_cast<int>(idx), t, sc.services, w);
      }
      for (const auto& n : sc.declared_services[idx]) {
        int sid = sc.services.find(n);
        m.services.push_back(sid);
        m.service_mask |= ServiceMask{1} << sid;
      }
      validate_agent(m, sc.services);
    } catch (const ModelError& e) {
      throw ScenarioError(e.what());
    }
    sc.agents.push_back(std::move(m));
    sc.agent_duration.push_back(t.contains("duration") ? std::optional(as_duration(t["duration"], w + ".duration"))
                                                       : std::nullopt);
  }
  std::vector<std::string> formulas(ids.size(), "true");
  std::vector<std::optional<std::vector<int>>> overrides(ids.size());
  sc.task_declared.assign(ids.size(), false);
  if (doc.contains("task")) {
    for (const auto& [id, t] : doc["task"].items()) {
      const std::string w = "[task." + id + "]";
      auto it = std::find(ids.begin(), ids.end(), id);
      if (it == ids.end()) schema(w, "no agent with id '" + id + "'");
      int idx = static_cast<int>(it - ids.begin());
      check_keys(t, {"formula", "deps"}, w);
      formulas[idx] = as_string(need(t, "formula", w), w + ".formula");
      sc.task_declared[idx] = true;
      if (t.contains("deps")) {
        std::vector<int> d;
        for (const auto& n : as_strings(t["deps"], w + ".deps")) {
          auto jt = std::find(ids.begin(), ids.end(), n);
          if (jt == ids.end()) schema(w, "deps names unknown agent '" + n + "'");
          d.push_back(static_cast<int>(jt - ids.begin()));
        }
        overrides[idx] = d;
      }
    }
  }
  for (std::size_t idx = 0; idx < ids.size(); ++idx) {
    try {
      sc.tasks.push_back(compile_task(static_cast<int>(idx), formulas[idx], sc.services, sc.agents, overrides[idx]));
    } catch (const LtlSyntaxError& e) {
      throw ScenarioError("[task." + ids[idx] + "].formula: " + e.what());
    } catch (const LtlUnknownAtom& e) {
      throw ScenarioError("[task." + ids[idx] + "].formula: " + e.what());
    } catch (const std::exception& e) {
      throw ScenarioError("[task." + ids[idx] + "]: " + e.what());
    }
  }
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot read scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream os;
  const auto& c = s.config;
  os << "[config]\n"
     << "h = " << c.h << "\nH = " << c.H << "\nH_cap = " << c.H_cap << "\nseed = " << c.seed << "\nmode = \""
     << mode_name(c.mode) << "\"\nstop_visits = " << c.stop_visits << "\nmax_iters = " << c.max_iters
     << "\nduration = [" << c.duration.lo << ", " << c.duration.hi << "]\nparam_sync = "
     << (c.param_sync ? "true" : "false") << "\n";
  for (int i = 0; i < s.num_agents(); ++i) {
    const auto& m = s.agents[i];
    os << "\n[agent." << m.id << "]\nservices = " << quoted_list(s.declared_services[i]) << "\n";
    if (s.agent_duration[i]) os << "duration = [" << s.agent_duration[i]->lo << ", " << s.agent_duration[i]->hi << "]\n";
    if (m.grid) {
      const auto& g = *m.grid;
      os << "\n[agent." << m.id << ".grid]\nwidth = " << g.width << "\nheight = " << g.height << "\nstart = ["
         << g.start_x << ", " << g.start_y << "]\n";
      auto rows = [&](const char* key, const auto& v) {
        if (v.empty()) return;
        os << key << " = [";
        for (std::size_t r = 0; r < v.size(); ++r) {
          os << (r ? ", " : "") << "[";
          for (std::size_t k = 0; k < v[r].size(); ++k) os << (k ? ", " : "") << v[r][k];
          os << "]";
        }
        os << "]\n";
      };
      rows("walls", g.walls);
      rows("hwalls", g.hwalls);
      rows("vwalls", g.vwalls);
      if (!g.services.empty()) {
        os << "services = [\n";
        for (const auto& sv : g.services) {
          os << "  [" << sv.x << ", " << sv.y << ", ";
          if (sv.services.size() == 1) os << quote(sv.services[0]);
          else os << quoted_list(sv.services);
          os << "],\n";
        }
        os << "]\n";
      }
    } else {
      const auto& ts = m.ts;
      os << "states = " << quoted_list(ts.state_names) << "\ninit = " << quote(ts.state_names[ts.init])
         << "\nactions = " << quoted_list(ts.action_names) << "\ntransitions = [\n";
      for (int st = 0; st < ts.num_states(); ++st)
        for (const auto& [a, d] : ts.out[st])
          os << "  [" << quote(ts.state_names[st]) << ", " << quote(ts.action_names[a]) << ", "
             << quote(ts.state_names[d]) << ", " << quote(s.services.label_string(m.labels[a])) << "],\n";
      os << "]\n";
    }
  }
  for (int i = 0; i < s.num_agents(); ++i) {
    if (!s.task_declared[i]) continue;
    const auto& t = s.tasks[i];
    os << "\n[task." << s.agents[i].id << "]\nformula = " << quote(t.formula_text) << "\n";
    if (t.deps_overridden) {
      std::vector<std::string> names;
      for (int d : t.deps) names.push_back(s.agents[d].id);
      os << "deps = " << quoted_list(names) << "\n";
    }
  }
  return os.str();
}

bool same_scenario(const Scenario& a, const Scenario& b) {
  if (!(a.config == b.config) || a.num_agents() != b.num_agents()) return false;
  if (a.services.names != b.services.names || a.services.owner != b.services.owner) return false;
  if (a.agent_duration != b.agent_duration || a.task_declared != b.task_declared) return false;
  for (int i = 0; i < a.num_agents(); ++i) {
    const auto &x = a.agents[i], &y = b.agents[i];
    if (x.id != y.id || x.services != y.services || x.labels != y.labels) return false;
    if (x.ts.state_names != y.ts.state_names || x.ts.init != y.ts.init || x.ts.action_names != y.ts.action_names ||
        x.ts.out != y.ts.out)
      return false;
    if (x.grid.has_value() != y.grid.has_value()) return false;
    const auto &t = a.tasks[i], &u = b.tasks[i];
    if (t.formula_text != u.formula_text || t.deps != u.deps || t.prop_service != u.prop_service) return false;
    if (write_automaton(t.ba) != write_automaton(u.ba)) return false;
  }
  return true;
}

std::pair<int, int> suggest_horizons(const std::vector<AgentModel>& agents) {
  std::vector<int> per_agent;
  for (const auto& m : agents) {
    const auto& ts = m.ts;
    std::vector<std::vector<int>> cells(ts.num_actions());
    for (int s = 0; s < ts.num_states(); ++s)
      for (const auto& [a, d] : ts.out[s])
        if (!m.labels[a].silent) cells[a].push_back(s);
    std::vector<int> acts;
    for (int a = 0; a < ts.num_actions(); ++a)
      if (!cells[a].empty()) acts.push_back(a);
    if (acts.size() < 2) continue;
    int best = -1;
    for (std::size_t i = 0; i < acts.size(); ++i)
      for (int s : cells[acts[i]]) {
        auto d = ts.distances_from(s);
        for (std::size_t j = 0; j < acts.size(); ++j) {
          if (i == j) continue;
          for (int t : cells[acts[j]])
            if (d[t] >= 0 && (best < 0 || d[t] < best)) best = d[t];
        }
      }
    if (best >= 0) per_agent.push_back(best);
  }
  int H = 1;
  if (!per_agent.empty()) {
    std::sort(per_agent.begin(), per_agent.end());
    H = per_agent[(per_agent.size() - 1) / 2];
  }
  return {3, std::max(H, 1)};
}

}  // namespace rhp
