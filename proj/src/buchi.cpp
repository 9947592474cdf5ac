#include "rhp/buchi.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <sstream>

#include "rhp/graph.hpp"

namespace rhp {

SymbolSet BuchiAutomaton::all_symbols() const {
  SymbolSet s;
  for (Symbol x = 0; x < num_symbols(); ++x) s.set(x);
  return s;
}

int BuchiAutomaton::add_state(const std::string& name, bool acc) {
  state_names.push_back(name);
  accepting.push_back(acc ? 1 : 0);
  out.emplace_back();
  return num_states() - 1;
}

void BuchiAutomaton::add_transitions(int src, const SymbolSet& on, int dst) {
  if (on.none()) return;
  for (auto& e : out[src])
    if (e.dst == dst) {
      e.on |= on;
      return;
    }
  out[src].push_back({dst, on});
}

void BuchiAutomaton::add_transition(int src, Symbol sym, int dst) {
  SymbolSet s;
  s.set(sym);
  add_transitions(src, s, dst);
}

void BuchiAutomaton::remove_transition(int src, Symbol sym, int dst) {
  auto& edges = out[src];
  for (auto it = edges.begin(); it != edges.end(); ++it)
    if (it->dst == dst) {
      it->on.reset(sym);
      if (it->on.none()) edges.erase(it);
      return;
    }
}

bool BuchiAutomaton::has_transition(int q, Symbol s, int dst) const {
  for (const auto& e : out[q])
    if (e.dst == dst) return e.on.test(s);
  return false;
}

void BuchiAutomaton::successors(int q, Symbol s, std::vector<int>& res) const {
  res.clear();
  for (const auto& e : out[q])
    if (e.on.test(s)) res.push_back(e.dst);
}

std::vector<int> BuchiAutomaton::successors(int q, Symbol s) const {
  std::vector<int> r;
  successors(q, s, r);
  return r;
}

std::vector<int> BuchiAutomaton::graph_successors(int q) const {
  std::vector<int> r;
  for (const auto& e : out[q]) r.push_back(e.dst);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

bool BuchiAutomaton::is_deadlock_free() const {
  const SymbolSet all = all_symbols();
  for (int q = 0; q < num_states(); ++q) {
    SymbolSet cover;
    for (const auto& e : out[q]) cover |= e.on;
    if (cover != all) return false;
  }
  return true;
}

std::size_t BuchiAutomaton::num_transitions() const {
  std::size_t n = 0;
  for (const auto& edges : out)
    for (const auto& e : edges) n += e.on.count();
  return n;
}

int BuchiAutomaton::state_index(const std::string& name) const {
  for (int i = 0; i < num_states(); ++i)
    if (state_names[i] == name) return i;
  return -1;
}

int BuchiAutomaton::prop_index(const std::string& name) const {
  for (std::size_t i = 0; i < props.size(); ++i)
    if (props[i] == name) return static_cast<int>(i);
  return -1;
}

Symbol BuchiAutomaton::symbol_of(const std::set<std::string>& names) const {
  Symbol s = 0;
  for (const auto& n : names) {
    int i = prop_index(n);
    if (i < 0) throw std::invalid_argument("unknown proposition '" + n + "'");
    s |= Symbol{1} << i;
  }
  return s;
}

std::string BuchiAutomaton::symbol_string(Symbol s) const {
  std::string r = "{";
  bool first = true;
  for (std::size_t i = 0; i < props.size(); ++i)
    if (s >> i & 1) {
      if (!first) r += ",";
      r += props[i];
      first = false;
    }
  return r + "}";
}

namespace {

using Key = std::array<std::uint64_t, kMaxSymbols / 64>;

Key key_of(const SymbolSet& s) {
  Key k{};
  for (int i = 0; i < kMaxSymbols; ++i)
    if (s.test(i)) k[i / 64] |= std::uint64_t{1} << (i % 64);
  return k;
}

// ---- tableau ---------------------------------------------------------------------------------

struct Closure {
  std::vector<FormulaPtr> f;
  std::map<std::string, int> id;
  int intern(const FormulaPtr& g) {
    std::string k = to_string(g);
    auto it = id.find(k);
    if (it != id.end()) return it->second;
    int i = static_cast<int>(f.size());
    f.push_back(g);
    id.emplace(k, i);
    if (g->lhs) intern(g->lhs);
    if (g->rhs) intern(g->rhs);
    return i;
  }
  int find(const FormulaPtr& g) const {
    auto it = id.find(to_string(g));
    return it == id.end() ? -1 : it->second;
  }
};

struct Node {
  std::set<int> incoming, fresh, old, next;
};

constexpr int kInitNode = -1;

struct Tableau {
  std::vector<Node> nodes;
};

Tableau expand_all(Closure& cl, int root) {
  Tableau t;
  std::map<std::pair<std::set<int>, std::set<int>>, int> index;
  std::vector<Node> stack;
  stack.push_back(Node{{kInitNode}, {root}, {}, {}});
  auto contradicts = [&](int lit, const std::set<int>& old) {
    const auto& g = cl.f[lit];
    if (g->op == Op::False) return true;
    if (g->op == Op::Atom) {
      int neg = cl.find(Formula::make_unary(Op::Not, g));
      return neg >= 0 && old.count(neg);
    }
    if (g->op == Op::Not) {
      int pos = cl.find(g->lhs);
      return pos >= 0 && old.count(pos);
    }
    return false;
  };
  while (!stack.empty()) {
    Node n = std::move(stack.back());
    stack.pop_back();
    if (n.fresh.empty()) {
      auto key = std::make_pair(n.old, n.next);
      auto it = index.find(key);
      if (it != index.end()) {
        t.nodes[it->second].incoming.insert(n.incoming.begin(), n.incoming.end());
        continue;
      }
      int id = static_cast<int>(t.nodes.size());
      index.emplace(key, id);
      Node succ{{id}, n.next, {}, {}};
      t.nodes.push_back(std::move(n));
      stack.push_back(std::move(succ));
      continue;
    }
    int eta = *n.fresh.begin();
    n.fresh.erase(n.fresh.begin());
    if (n.old.count(eta)) {
      stack.push_back(std::move(n));
      continue;
    }
    const auto& g = cl.f[eta];
    auto add_fresh = [&](Node& m, const FormulaPtr& h) {
      int id = cl.find(h);
      if (!m.old.count(id)) m.fresh.insert(id);
    };
    switch (g->op) {
      case Op::True:
      case Op::False:
      case Op::Atom:
      case Op::Not:
        if (contradicts(eta, n.old)) break;  // discard node
        n.old.insert(eta);
        stack.push_back(std::move(n));
        break;
      case Op::And:
        add_fresh(n, g->lhs);
        add_fresh(n, g->rhs);
        n.old.insert(eta);
        stack.push_back(std::move(n));
        break;
      case Op::Next:
        n.old.insert(eta);
        n.next.insert(cl.find(g->lhs));
        stack.push_back(std::move(n));
        break;
      case Op::Or:
      case Op::Until:
      case Op::Release: {
        Node a = n, b = n;
        a.old.insert(eta);
        b.old.insert(eta);
        if (g->op == Op::Or) {
          add_fresh(a, g->lhs);
          add_fresh(b, g->rhs);
        } else if (g->op == Op::Until) {
          add_fresh(a, g->lhs);
          a.next.insert(eta);
          add_fresh(b, g->rhs);
        } else {
          add_fresh(a, g->rhs);
          a.next.insert(eta);
          add_fresh(b, g->lhs);
          add_fresh(b, g->rhs);
        }
        stack.push_back(std::move(b));
        stack.push_back(std::move(a));
        break;
      }
      default:
        throw std::logic_error("formula not in negation normal form");
    }
  }
  return t;
}

// Removes states with empty language (keeping the initial state).
BuchiAutomaton trim_dead(const BuchiAutomaton& b) {
  std::vector<char> live = live_states(b);
  live[b.init] = 1;
  std::vector<int> remap(b.num_states(), -1);
  BuchiAutomaton r;
  r.props = b.props;
  for (int q = 0; q < b.num_states(); ++q)
    if (live[q]) remap[q] = r.add_state(b.state_names[q], b.accepting[q]);
  r.init = remap[b.init];
  for (int q = 0; q < b.num_states(); ++q) {
    if (remap[q] < 0) continue;
    for (const auto& e : b.out[q])
      if (remap[e.dst] >= 0) r.add_transitions(remap[q], e.on, remap[e.dst]);
  }
  return r;
}

// Quotient by forward bisimulation; states renumbered in breadth-first order from the initial state.
BuchiAutomaton bisimulation_quotient(const BuchiAutomaton& b) {
  const int n = b.num_states();
  std::vector<int> block(n);
  for (int q = 0; q < n; ++q) block[q] = b.accepting[q] ? 1 : 0;
  int nblocks = -1;
  while (true) {
    std::map<std::pair<int, std::vector<std::pair<int, Key>>>, int> sig_id;
    std::vector<int> nb(n);
    for (int q = 0; q < n; ++q) {
      std::map<int, SymbolSet> by_block;
      for (const auto& e : b.out[q]) by_block[block[e.dst]] |= e.on;
      std::vector<std::pair<int, Key>> sig;
      for (const auto& [blk, on] : by_block) sig.push_back({blk, key_of(on)});
      auto k = std::make_pair(block[q], std::move(sig));
      auto it = sig_id.find(k);
      if (it == sig_id.end()) it = sig_id.emplace(std::move(k), static_cast<int>(sig_id.size())).first;
      nb[q] = it->second;
    }
    int count = static_cast<int>(sig_id.size());
    block = std::move(nb);
    if (count == nblocks) break;
    nblocks = count;
  }
  // Breadth-first numbering of blocks from the initial block.
  std::vector<int> rep(nblocks, -1);
  for (int q = 0; q < n; ++q)
    if (rep[block[q]] < 0) rep[block[q]] = q;
  std::vector<int> order(nblocks, -1);
  std::deque<int> queue{block[b.init]};
  int next = 0;
  order[block[b.init]] = next++;
  while (!queue.empty()) {
    int blk = queue.front();
    queue.pop_front();
    std::vector<int> succ;
    for (const auto& e : b.out[rep[blk]]) succ.push_back(block[e.dst]);
    std::sort(succ.begin(), succ.end());
    for (int s : succ)
      if (order[s] < 0) {
        order[s] = next++;
        queue.push_back(s);
      }
  }
  BuchiAutomaton r;
  r.props = b.props;
  std::vector<int> inv(next, -1);
  for (int blk = 0; blk < nblocks; ++blk)
    if (order[blk] >= 0) inv[order[blk]] = blk;
  for (int i = 0; i < next; ++i) r.add_state("q" + std::to_string(i), b.accepting[rep[inv[i]]]);
  r.init = 0;
  for (int i = 0; i < next; ++i)
    for (const auto& e : b.out[rep[inv[i]]]) r.add_transitions(i, e.on, order[block[e.dst]]);
  for (auto& edges : r.out)
    std::sort(edges.begin(), edges.end(), [](const BuchiEdge& x, const BuchiEdge& y) { return x.dst < y.dst; });
  return r;
}

}  // namespace

BuchiAutomaton ltl_to_buchi(const FormulaPtr& input, const std::vector<std::string>& props) {
  if (props.size() > static_cast<std::size_t>(kMaxProps)) throw AlphabetCapExceeded(props.size());
  for (const auto& a : atoms_of(input))
    if (std::find(props.begin(), props.end(), a) == props.end())
      throw std::invalid_argument("formula atom '" + a + "' is not a declared proposition");
  FormulaPtr f = is_nnf(input) ? input : to_nnf(input);

  Closure cl;
  int root = cl.intern(f);
  Tableau tab = expand_all(cl, root);

  std::vector<int> untils;
  for (int i = 0; i < static_cast<int>(cl.f.size()); ++i)
    if (cl.f[i]->op == Op::Until) untils.push_back(i);
  const int m = static_cast<int>(untils.size());
  const int copies = std::max(m, 1);
  const int nn = static_cast<int>(tab.nodes.size());

  auto in_acc = [&](int node, int j) {
    if (m == 0) return true;
    const auto& old = tab.nodes[node].old;
    int u = untils[j];
    return old.count(cl.find(cl.f[u]->rhs)) > 0 || old.count(u) == 0;
  };

  // Per-node symbol sets from the literals in `old`.
  BuchiAutomaton proto;
  proto.props = props;
  std::vector<SymbolSet> label(nn);
  for (int i = 0; i < nn; ++i) {
    Symbol pos = 0, neg = 0;
    for (int id : tab.nodes[i].old) {
      const auto& g = cl.f[id];
      if (g->op == Op::Atom) pos |= Symbol{1} << proto.prop_index(g->atom);
      if (g->op == Op::Not) neg |= Symbol{1} << proto.prop_index(g->lhs->atom);
    }
    for (Symbol s = 0; s < proto.num_symbols(); ++s)
      if ((s & pos) == pos && (s & neg) == 0) label[i].set(s);
  }
  std::vector<std::vector<int>> succ_nodes(nn + 1);  // index nn stands for the initial pseudo-node
  for (int i = 0; i < nn; ++i)
    for (int p : tab.nodes[i].incoming) succ_nodes[p == kInitNode ? nn : p].push_back(i);
  for (auto& v : succ_nodes) std::sort(v.begin(), v.end());

  // Degeneralized states (node, copy); the initial pseudo-node lives in copy 0.
  std::map<std::pair<int, int>, int> sid;
  std::deque<std::pair<int, int>> queue;
  auto get = [&](int node, int c) {
    auto k = std::make_pair(node, c);
    auto it = sid.find(k);
    if (it != sid.end()) return it->second;
    // The initial pseudo-node has no incoming edges, so its flag never affects the language;
    // marking it accepting in the all-accepting case lets `true` collapse to one state.
    bool acc = node == nn ? m == 0 : c == 0 && in_acc(node, 0);
    int id = proto.add_state("n" + std::to_string(node) + "." + std::to_string(c), acc);
    sid.emplace(k, id);
    queue.push_back(k);
    return id;
  };
  proto.init = get(nn, 0);
  while (!queue.empty()) {
    auto [node, c] = queue.front();
    queue.pop_front();
    int src = sid.at({node, c});
    int nc = c;
    if (node != nn && m > 0 && in_acc(node, c)) nc = (c + 1) % copies;
    for (int t : succ_nodes[node]) {
      int dst = get(t, nc);
      proto.add_transitions(src, label[t], dst);
    }
  }
  return complete_deadlock_free(bisimulation_quotient(trim_dead(proto)));
}

BuchiAutomaton complete_deadlock_free(const BuchiAutomaton& b) {
  const SymbolSet all = b.all_symbols();
  std::vector<SymbolSet> missing(b.num_states());
  bool any = false;
  for (int q = 0; q < b.num_states(); ++q) {
    SymbolSet cover;
    for (const auto& e : b.out[q]) cover |= e.on;
    missing[q] = all & ~cover;
    any = any || missing[q].any();
  }
  if (!any) return b;
  BuchiAutomaton r = b;
  int sink = r.add_state("sink", false);
  for (int q = 0; q < b.num_states(); ++q) r.add_transitions(q, missing[q], sink);
  r.add_transitions(sink, all, sink);
  return r;
}

std::set<int> reachable_k(const BuchiAutomaton& b, int q, int k) {
  std::set<int> cur{q};
  for (int i = 0; i < k; ++i) {
    std::set<int> nxt;
    for (int s : cur)
      for (const auto& e : b.out[s]) nxt.insert(e.dst);
    cur = std::move(nxt);
  }
  return cur;
}

std::vector<int> distances_from(const BuchiAutomaton& b, int q) {
  std::vector<std::vector<int>> adj(b.num_states());
  for (int s = 0; s < b.num_states(); ++s) adj[s] = b.graph_successors(s);
  std::vector<int> d = graph::bfs(adj, q);
  for (int& x : d)
    if (x < 0) x = kInfinity;
  return d;
}

int dist(const BuchiAutomaton& b, int q, int q2) { return distances_from(b, q)[q2]; }

bool accepts_lasso(const BuchiAutomaton& b, const std::vector<Symbol>& prefix,
                   const std::vector<Symbol>& period) {
  if (period.empty()) throw std::invalid_argument("lasso period must be nonempty");
  std::vector<Symbol> word = prefix;
  word.insert(word.end(), period.begin(), period.end());
  const int len = static_cast<int>(word.size());
  const int loop = static_cast<int>(prefix.size());
  const int ns = b.num_states();
  auto id = [&](int q, int pos) { return q * len + pos; };
  std::vector<std::vector<int>> adj(ns * len);
  std::vector<char> marked(ns * len, 0), seen(ns * len, 0);
  std::deque<int> queue{id(b.init, 0)};
  seen[id(b.init, 0)] = 1;
  std::vector<int> tmp;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    int q = v / len, pos = v % len;
    if (b.accepting[q]) marked[v] = 1;
    int np = pos + 1 == len ? loop : pos + 1;
    b.successors(q, word[pos], tmp);
    for (int q2 : tmp) {
      int w = id(q2, np);
      adj[v].push_back(w);
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return graph::can_reach_marked_cycle(adj, marked)[id(b.init, 0)] != 0;
}

std::vector<char> live_states(const BuchiAutomaton& b, const SymbolSet& allowed) {
  std::vector<std::vector<int>> adj(b.num_states());
  for (int q = 0; q < b.num_states(); ++q)
    for (const auto& e : b.out[q])
      if ((e.on & allowed).any()) adj[q].push_back(e.dst);
  return graph::can_reach_marked_cycle(adj, b.accepting);
}

std::vector<char> live_states(const BuchiAutomaton& b) { return live_states(b, b.all_symbols()); }

std::vector<char> universal_states(const BuchiAutomaton& b) {
  std::vector<char> u(b.accepting.begin(), b.accepting.end());
  const SymbolSet all = b.all_symbols();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int q = 0; q < b.num_states(); ++q) {
      if (!u[q]) continue;
      SymbolSet cover;
      for (const auto& e : b.out[q])
        if (u[e.dst]) cover |= e.on;
      if (cover != all) {
        u[q] = 0;
        changed = true;
      }
    }
  }
  return u;
}

std::string write_automaton(const BuchiAutomaton& b) {
  std::ostringstream os;
  os << "props:";
  for (const auto& p : b.props) os << ' ' << p;
  os << "\nstates:";
  for (const auto& s : b.state_names) os << ' ' << s;
  os << "\ninit: " << b.state_names[b.init] << "\naccepting:";
  for (int q = 0; q < b.num_states(); ++q)
    if (b.accepting[q]) os << ' ' << b.state_names[q];
  os << '\n';
  for (int q = 0; q < b.num_states(); ++q) {
    std::vector<std::pair<Symbol, int>> lines;
    for (const auto& e : b.out[q])
      for (Symbol s = 0; s < b.num_symbols(); ++s)
        if (e.on.test(s)) lines.push_back({s, e.dst});
    std::sort(lines.begin(), lines.end());
    for (const auto& [s, d] : lines)
      os << b.state_names[q] << " ; " << b.symbol_string(s) << " ; " << b.state_names[d] << '\n';
  }
  return os.str();
}

namespace {
std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto z = s.find_last_not_of(" \t\r");
  return s.substr(a, z - a + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> r;
  std::string w;
  while (is >> w) r.push_back(w);
  return r;
}
}  // namespace

BuchiAutomaton read_automaton(const std::string& text) {
  BuchiAutomaton b;
  std::istringstream is(text);
  std::string line, init_name;
  std::vector<std::string> acc_names;
  int lineno = 0;
  auto state = [&](const std::string& name) {
    int i = b.state_index(name);
    return i >= 0 ? i : b.add_state(name);
  };
  bool have_props = false;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("automaton line " + std::to_string(lineno) + ": " + why);
    };
    auto colon = line.find(':');
    if (line.find(';') == std::string::npos && colon != std::string::npos) {
      std::string key = trim(line.substr(0, colon));
      auto vals = words(line.substr(colon + 1));
      if (key == "props") {
        if (vals.size() > static_cast<std::size_t>(kMaxProps)) throw AlphabetCapExceeded(vals.size());
        b.props = vals;
        have_props = true;
      } else if (key == "states") {
        for (const auto& v : vals) state(v);
      } else if (key == "init") {
        if (vals.size() != 1) fail("init needs exactly one state");
        init_name = vals[0];
      } else if (key == "accepting") {
        acc_names = vals;
      } else {
        fail("unknown header '" + key + "'");
      }
      continue;
    }
    if (!have_props) fail("transition before props header");
    auto p1 = line.find(';'), p2 = line.find(';', p1 + 1);
    if (p2 == std::string::npos) fail("expected 'src ; {p,...} ; dst'");
    std::string src = trim(line.substr(0, p1)), sym = trim(line.substr(p1 + 1, p2 - p1 - 1)),
                dst = trim(line.substr(p2 + 1));
    if (sym.size() < 2 || sym.front() != '{' || sym.back() != '}') fail("symbol must be written {p,...}");
    std::set<std::string> names;
    std::string inner = sym.substr(1, sym.size() - 2);
    std::istringstream ps(inner);
    std::string tok;
    while (std::getline(ps, tok, ',')) {
      tok = trim(tok);
      if (!tok.empty()) names.insert(tok);
    }
    Symbol s;
    try {
      s = b.symbol_of(names);
    } catch (const std::exception& e) {
      fail(e.what());
    }
    int a = state(src), d = state(dst);
    b.add_transition(a, s, d);
  }
  if (init_name.empty()) throw std::invalid_argument("automaton has no init header");
  b.init = state(init_name);
  for (const auto& a : acc_names) b.accepting[state(a)] = 1;
  return b;
}

}  // namespace rhp
