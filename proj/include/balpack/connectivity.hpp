#pragma once

// Root-connectivity, k-root-connectivity with cut witnesses, critical arcs,
// extendability, and the integral max-flow used throughout.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "balpack/errors.hpp"
#include "balpack/graph.hpp"

namespace balpack {

/// Directed network with integral capacities. Links are addressed by the
/// index `add_link` returns.
struct FlowNetwork {
  struct Link {
    int from;
    int to;
    std::int64_t capacity;
  };

  int num_nodes = 0;
  int source = 0;
  int sink = 0;
  std::vector<Link> links;

  FlowNetwork() = default;
  FlowNetwork(int nodes, int s, int t) : num_nodes(nodes), source(s), sink(t) {}

  int add_link(int from, int to, std::int64_t capacity) {
    links.push_back({from, to, capacity});
    return static_cast<int>(links.size()) - 1;
  }
};

struct MaxFlowResult {
  std::int64_t value = 0;
  std::vector<std::int64_t> flow;  // per link
  std::vector<char> source_side;   // per node: reachable from source in the residual
};

/// Dinic's algorithm. Stops early once `limit` units have been routed.
inline MaxFlowResult max_flow(const FlowNetwork& net,
                              std::int64_t limit = std::numeric_limits<std::int64_t>::max()) {
  struct Res {
    int to;
    int rev;
    std::int64_t cap;
  };
  const auto nn = static_cast<std::size_t>(net.num_nodes);
  std::vector<std::vector<Res>> g(nn);
  std::vector<std::pair<int, int>> where(net.links.size());
  for (std::size_t i = 0; i < net.links.size(); ++i) {
    const auto& l = net.links[i];
    if (l.capacity < 0) throw ContractError("negative capacity");
    auto& fu = g[static_cast<std::size_t>(l.from)];
    auto& fv = g[static_cast<std::size_t>(l.to)];
    where[i] = {l.from, static_cast<int>(fu.size())};
    fu.push_back({l.to, static_cast<int>(fv.size()) + (l.from == l.to ? 1 : 0), l.capacity});
    g[static_cast<std::size_t>(l.to)].push_back({l.from, static_cast<int>(fu.size()) - 1, 0});
  }

  std::vector<int> level(nn), it(nn);
  auto bfs = [&] {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[static_cast<std::size_t>(net.source)] = 0;
    q.push(net.source);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const Res& e : g[static_cast<std::size_t>(u)])
        if (e.cap > 0 && level[static_cast<std::size_t>(e.to)] < 0) {
          level[static_cast<std::size_t>(e.to)] = level[static_cast<std::size_t>(u)] + 1;
          q.push(e.to);
        }
    }
    return level[static_cast<std::size_t>(net.sink)] >= 0;
  };
  // Iterative blocking-flow DFS.
  auto dfs = [&](std::int64_t want) -> std::int64_t {
    std::vector<std::pair<int, int>> path;  // (node, edge index)
    int u = net.source;
    while (true) {
      if (u == net.sink) {
        std::int64_t push = want;
        for (auto [x, ei] : path) push = std::min(push, g[static_cast<std::size_t>(x)][static_cast<std::size_t>(ei)].cap);
        for (auto [x, ei] : path) {
          Res& e = g[static_cast<std::size_t>(x)][static_cast<std::size_t>(ei)];
          e.cap -= push;
          g[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap += push;
        }
        return push;
      }
      auto& edges = g[static_cast<std::size_t>(u)];
      int& i = it[static_cast<std::size_t>(u)];
      bool advanced = false;
      for (; i < static_cast<int>(edges.size()); ++i) {
        const Res& e = edges[static_cast<std::size_t>(i)];
        if (e.cap > 0 && level[static_cast<std::size_t>(e.to)] == level[static_cast<std::size_t>(u)] + 1) {
          path.emplace_back(u, i);
          u = e.to;
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        if (path.empty()) return 0;
        level[static_cast<std::size_t>(u)] = -1;  // dead end
        u = path.back().first;
        path.pop_back();
        ++it[static_cast<std::size_t>(u)];
      }
    }
  };

  MaxFlowResult result;
  if (net.source != net.sink) {
    while (result.value < limit && bfs()) {
      std::fill(it.begin(), it.end(), 0);
      while (result.value < limit) {
        std::int64_t f = dfs(limit - result.value);
        if (f == 0) break;
        result.value += f;
      }
    }
  }
  result.flow.resize(net.links.size());
  for (std::size_t i = 0; i < net.links.size(); ++i) {
    auto [u, ei] = where[i];
    const Res& e = g[static_cast<std::size_t>(u)][static_cast<std::size_t>(ei)];
    result.flow[i] = net.links[i].capacity - e.cap;
  }
  result.source_side.assign(nn, 0);
  std::queue<int> q;
  result.source_side[static_cast<std::size_t>(net.source)] = 1;
  q.push(net.source);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (const Res& e : g[static_cast<std::size_t>(u)])
      if (e.cap > 0 && !result.source_side[static_cast<std::size_t>(e.to)]) {
        result.source_side[static_cast<std::size_t>(e.to)] = 1;
        q.push(e.to);
      }
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace detail {

/// BFS from the root over arcs not flagged in `blocked`. Returns the parent arc
/// per vertex (-1 if unreached; the root maps to -1 too) and the reach count.
struct Reach {
  std::vector<ArcId> parent_arc;
  std::vector<char> reached;
  int count = 0;
  bool all() const { return count == static_cast<int>(reached.size()); }
};

inline Reach reach_from_root(const RootedDigraph& d, const std::vector<char>& blocked,
                             ArcId skip = -1) {
  const auto n = static_cast<std::size_t>(d.num_vertices());
  Reach r{std::vector<ArcId>(n, -1), std::vector<char>(n, 0), 1};
  std::vector<VertexId> queue{d.root()};
  r.reached[static_cast<std::size_t>(d.root())] = 1;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    VertexId u = queue[qi];
    for (ArcId a : d.out_arcs(u)) {
      if (a == skip || (!blocked.empty() && blocked[static_cast<std::size_t>(a)])) continue;
      VertexId h = d.head(a);
      if (r.reached[static_cast<std::size_t>(h)]) continue;
      r.reached[static_cast<std::size_t>(h)] = 1;
      r.parent_arc[static_cast<std::size_t>(h)] = a;
      ++r.count;
      queue.push_back(h);
    }
  }
  return r;
}

inline bool root_connected_without(const RootedDigraph& d, const std::vector<char>& blocked) {
  return reach_from_root(d, blocked).all();
}

/// Removing `extra` from D-blocked keeps it root-connected? Assumes D-blocked
/// is root-connected; `tree` is a reach of D-blocked. An arc off the BFS tree
/// can never be critical.
inline bool stays_root_connected(const RootedDigraph& d, const std::vector<char>& blocked,
                                 const Reach& tree, ArcId extra) {
  VertexId h = d.head(extra);
  if (tree.parent_arc[static_cast<std::size_t>(h)] != extra) return true;
  return reach_from_root(d, blocked, extra).all();
}

}  // namespace detail

/// Every vertex reachable from the root in D minus `removed`.
inline bool is_root_connected(const RootedDigraph& d, const ArcSelection& removed = {}) {
  return detail::root_connected_without(d, removed.mask(static_cast<std::size_t>(d.num_arcs())));
}

/// A non-empty root-free vertex set and the number of arcs entering it.
struct CutWitness {
  std::vector<VertexId> vertices;
  int in_degree = 0;
};

/// d^-(X): arcs with tail outside X and head inside X.
inline int in_degree(const RootedDigraph& d, const std::vector<VertexId>& set) {
  std::vector<char> in(static_cast<std::size_t>(d.num_vertices()), 0);
  for (VertexId v : set) in[static_cast<std::size_t>(v)] = 1;
  int count = 0;
  for (const Arc& a : d.arcs())
    if (in[static_cast<std::size_t>(a.head)] && !in[static_cast<std::size_t>(a.tail)]) ++count;
  return count;
}

struct RootConnectivity {
  bool connected = true;
  std::optional<CutWitness> cut;
  explicit operator bool() const { return connected; }
};

/// d^-(X) >= k for every non-empty X avoiding the root, via min over v of
/// max-flow(r -> v) with unit capacity per arc copy. On failure the witness is
/// the sink side of a minimum cut for the smallest violating v.
inline RootConnectivity is_k_root_connected(const RootedDigraph& d, int k) {
  if (k < 1) throw ContractError("k must be positive");
  const int n = d.num_vertices();
  FlowNetwork base(n, d.root(), d.root());
  for (const Arc& a : d.arcs()) base.add_link(a.tail, a.head, 1);
  for (VertexId v = 0; v < n; ++v) {
    if (v == d.root()) continue;
    FlowNetwork net = base;
    net.sink = v;
    auto res = max_flow(net, k);
    if (res.value < k) {
      CutWitness w;
      for (VertexId u = 0; u < n; ++u)
        if (!res.source_side[static_cast<std::size_t>(u)]) w.vertices.push_back(u);
      w.in_degree = in_degree(d, w.vertices);
      return {false, std::move(w)};
    }
  }
  return {true, std::nullopt};
}

/// Arcs (optionally restricted to the given tails) whose removal from
/// D - removed destroys root-connectivity.
inline ArcSelection critical_arcs(const RootedDigraph& d, const ArcSelection& removed,
                                  const std::optional<std::vector<VertexId>>& tails = std::nullopt) {
  auto blocked = removed.mask(static_cast<std::size_t>(d.num_arcs()));
  auto reach = detail::reach_from_root(d, blocked);
  if (!reach.all()) throw ContractError("critical_arcs: D minus removed is not root-connected");
  std::vector<char> tail_ok(static_cast<std::size_t>(d.num_vertices()), tails ? 0 : 1);
  if (tails)
    for (VertexId v : *tails) tail_ok[static_cast<std::size_t>(v)] = 1;
  std::vector<int> out;
  for (VertexId v = 0; v < d.num_vertices(); ++v) {
    ArcId a = reach.parent_arc[static_cast<std::size_t>(v)];
    if (a < 0 || !tail_ok[static_cast<std::size_t>(d.tail(a))]) continue;
    if (!detail::reach_from_root(d, blocked, a).all()) out.push_back(a);
  }
  return ArcSelection(std::move(out));
}

/// Both D - A1 and D - A2 are root-connected.
inline bool is_extendable_pair(const RootedDigraph& d, const ArcSelection& a1,
                               const ArcSelection& a2) {
  return is_root_connected(d, a1) && is_root_connected(d, a2);
}

}  // namespace balpack
