#pragma once

#include <algorithm>
#include <deque>
#include <vector>

namespace rhp::graph {

// Iterative Tarjan. Returns the component id of every node; ids are in reverse topological order.
inline std::vector<int> scc(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::pair<int, std::size_t>> call;
  int counter = 0, ncomp = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, it] = call.back();
      if (it < adj[v].size()) {
        int w = adj[v][it++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = ncomp;
          } while (w != v);
          ++ncomp;
        }
        int done = v;
        call.pop_back();
        if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      }
    }
  }
  return comp;
}

// Nodes that can reach a nontrivial strongly connected component containing a marked node.
inline std::vector<char> can_reach_marked_cycle(const std::vector<std::vector<int>>& adj,
                                                const std::vector<char>& marked) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> comp = scc(adj);
  int ncomp = 0;
  for (int c : comp) ncomp = std::max(ncomp, c + 1);
  std::vector<int> size(ncomp, 0);
  std::vector<char> has_mark(ncomp, 0), cyclic(ncomp, 0);
  for (int v = 0; v < n; ++v) {
    size[comp[v]]++;
    if (marked[v]) has_mark[comp[v]] = 1;
    for (int w : adj[v])
      if (w == v) cyclic[comp[v]] = 1;
  }
  std::vector<std::vector<int>> rev(n);
  for (int v = 0; v < n; ++v)
    for (int w : adj[v]) rev[w].push_back(v);
  std::vector<char> good(n, 0);
  std::deque<int> q;
  for (int v = 0; v < n; ++v) {
    int c = comp[v];
    if (has_mark[c] && (size[c] > 1 || cyclic[c])) {
      good[v] = 1;
      q.push_back(v);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int u : rev[v])
      if (!good[u]) {
        good[u] = 1;
        q.push_back(u);
      }
  }
  return good;
}

// Unit-weight shortest distances from `src`; -1 for unreachable.
inline std::vector<int> bfs(const std::vector<std::vector<int>>& adj, int src) {
  std::vector<int> d(adj.size(), -1);
  std::deque<int> q{src};
  d[src] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : adj[v])
      if (d[w] < 0) {
        d[w] = d[v] + 1;
        q.push_back(w);
      }
  }
  return d;
}

}  // namespace rhp::graph
