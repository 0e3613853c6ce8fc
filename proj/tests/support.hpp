#pragma once

// Random instances and small brute-force references shared by the unit tests.

#include <cstdint>
#include <random>
#include <vector>

#include "balpack/graph.hpp"

namespace testing_support {

using namespace balpack;

inline RootedDigraph random_digraph(std::mt19937_64& rng, int n, int arcs) {
  std::vector<Arc> list;
  if (n >= 2)
    for (int i = 0; i < arcs; ++i) {
      int u = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      int v = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
      if (u != v) list.push_back({u, v});
    }
  return RootedDigraph(n, 0, list);
}

inline RootedGraph random_graph(std::mt19937_64& rng, int n, int edges) {
  std::vector<Edge> list;
  if (n >= 2)
    for (int i = 0; i < edges; ++i) {
      int u = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      int v = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      if (u != v) list.push_back({u, v});
    }
  return RootedGraph(n, 0, list);
}

/// min over non-empty X ⊆ V - r of d^-(X), by enumerating subsets.
inline int brute_min_in_degree(const RootedDigraph& d) {
  const int n = d.num_vertices();
  int best = 1 << 30;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (mask & (1u << d.root())) continue;
    int deg = 0;
    for (const Arc& a : d.arcs())
      if ((mask >> a.head & 1u) && !(mask >> a.tail & 1u)) ++deg;
    best = std::min(best, deg);
  }
  return best;
}

/// Reachability from the root ignoring arcs flagged in `skip`.
inline bool brute_root_connected(const RootedDigraph& d, const std::vector<char>& skip) {
  std::vector<char> seen(static_cast<std::size_t>(d.num_vertices()), 0);
  seen[static_cast<std::size_t>(d.root())] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int a = 0; a < d.num_arcs(); ++a) {
      if (!skip.empty() && skip[static_cast<std::size_t>(a)]) continue;
      if (seen[static_cast<std::size_t>(d.tail(a))] && !seen[static_cast<std::size_t>(d.head(a))]) {
        seen[static_cast<std::size_t>(d.head(a))] = 1;
        grew = true;
      }
    }
  }
  for (char c : seen)
    if (!c) return false;
  return true;
}

/// Connectivity of (V, S) via repeated relaxation; true iff S spans a tree.
inline bool brute_spanning_tree(const RootedGraph& g, const std::vector<int>& edges) {
  if (static_cast<int>(edges.size()) != g.num_vertices() - 1) return false;
  std::vector<char> seen(static_cast<std::size_t>(g.num_vertices()), 0);
  seen[0] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int e : edges) {
      auto [u, v] = g.edge(e);
      if (seen[static_cast<std::size_t>(u)] != seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(u)] = seen[static_cast<std::size_t>(v)] = 1;
        grew = true;
      }
    }
  }
  for (char c : seen)
    if (!c) return false;
  return true;
}

/// All spanning trees as sorted edge-id lists, by subset enumeration.
inline std::vector<std::vector<int>> brute_spanning_trees(const RootedGraph& g) {
  std::vector<std::vector<int>> out;
  const int m = g.num_edges();
  const int need = g.num_vertices() - 1;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(pick.size()) == need) {
      if (brute_spanning_tree(g, pick)) out.push_back(pick);
      return;
    }
    if (m - next < need - static_cast<int>(pick.size())) return;
    pick.push_back(next);
    self(self, next + 1);
    pick.pop_back();
    self(self, next + 1);
  };
  rec(rec, 0);
  return out;
}

}  // namespace testing_support
