#pragma once

// Exhaustive deciders for small instances and an independent witness
// validator. Nothing here reuses the FPT pipeline; the validator carries its
// own traversal and max-flow.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "balpack/errors.hpp"
#include "balpack/flow.hpp"
#include "balpack/graph.hpp"
#include "balpack/report.hpp"

namespace balpack::oracle {

struct OracleResult {
  Decision decision = Decision::no;
  std::optional<Witness> witness;
};

namespace detail {

inline void check_vertices(int n, const OracleBudget& budget) {
  if (n > budget.max_vertices)
    throw BudgetExceeded("oracle budget allows " + std::to_string(budget.max_vertices) + " vertices, got " +
                         std::to_string(n));
}

/// A spanning structure as one parent link per non-root vertex (vertex order
/// 0..n-1, root skipped). For digraphs the link is the in-arc, for graphs the
/// edge towards the root.
struct Choice {
  std::vector<int> parent_link;  // per non-root vertex
  std::vector<std::uint64_t> mask;
};

inline std::vector<std::uint64_t> id_mask(const std::vector<int>& ids, int universe) {
  std::vector<std::uint64_t> m(static_cast<std::size_t>(universe + 63) / 64, 0);
  for (int id : ids) m[static_cast<std::size_t>(id) / 64] |= std::uint64_t{1} << (id % 64);
  return m;
}

inline bool masks_disjoint(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return false;
  return true;
}

/// Enumerates parent-link choices. `links(v)` lists (link id, parent vertex)
/// options; `accept(parent_vertex)` judges a complete choice, given the parent
/// vertex per vertex. Every choice that forms a tree towards the root and is
/// accepted is returned.
template <class Links, class Accept>
std::vector<Choice> enumerate_choices(int n, VertexId root, int universe, const OracleBudget& budget,
                                      Links links, Accept accept) {
  std::vector<VertexId> order;
  for (VertexId v = 0; v < n; ++v)
    if (v != root) order.push_back(v);
  std::vector<std::vector<std::pair<int, VertexId>>> options;
  double product = 1;
  for (VertexId v : order) {
    options.push_back(links(v));
    product *= static_cast<double>(std::max<std::size_t>(1, options.back().size()));
    if (options.back().empty()) return {};
  }
  if (product > static_cast<double>(budget.max_structures))
    throw BudgetExceeded("oracle budget exceeded: " + std::to_string(static_cast<long long>(product)) +
                         " parent choices");

  std::vector<Choice> out;
  std::vector<int> pick(order.size(), 0);
  std::vector<VertexId> parent(static_cast<std::size_t>(n), -1);
  std::vector<int> state(static_cast<std::size_t>(n));
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == order.size()) {
      // Acyclic iff every vertex walks up to the root.
      std::fill(state.begin(), state.end(), 0);
      state[static_cast<std::size_t>(root)] = 2;
      for (VertexId v : order) {
        std::vector<VertexId> path;
        VertexId u = v;
        while (state[static_cast<std::size_t>(u)] == 0) {
          state[static_cast<std::size_t>(u)] = 1;
          path.push_back(u);
          u = parent[static_cast<std::size_t>(u)];
        }
        if (state[static_cast<std::size_t>(u)] == 1) return;
        for (VertexId w : path) state[static_cast<std::size_t>(w)] = 2;
      }
      if (!accept(parent)) return;
      Choice c;
      for (std::size_t j = 0; j < order.size(); ++j) c.parent_link.push_back(options[j][static_cast<std::size_t>(pick[j])].first);
      auto ids = c.parent_link;
      c.mask = id_mask(ids, universe);
      out.push_back(std::move(c));
      return;
    }
    for (std::size_t o = 0; o < options[i].size(); ++o) {
      pick[i] = static_cast<int>(o);
      parent[static_cast<std::size_t>(order[i])] = options[i][o].second;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

/// Descendant counts (excluding the vertex) from a parent-vertex array.
inline std::vector<int> descendants(const std::vector<VertexId>& parent, VertexId root) {
  std::vector<int> below(parent.size(), 0);
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (static_cast<VertexId>(v) == root) continue;
    VertexId u = parent[v];
    while (u != root && u >= 0) {
      ++below[static_cast<std::size_t>(u)];
      u = parent[static_cast<std::size_t>(u)];
    }
  }
  return below;
}

/// Finds a pair of choices with disjoint links. Choices are sorted by their
/// link vectors so that a partner search can skip every group that repeats
/// one of the first choice's links at the same vertex.
inline std::optional<std::pair<std::size_t, std::size_t>> disjoint_pair(std::vector<Choice>& all) {
  std::sort(all.begin(), all.end(), [](const Choice& a, const Choice& b) { return a.parent_link < b.parent_link; });
  if (all.empty()) return std::nullopt;
  const std::size_t depth = all.front().parent_link.size();
  if (depth == 0) return std::pair<std::size_t, std::size_t>{0, 0};
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& first = all[i];
    std::optional<std::size_t> hit;
    auto search = [&](auto&& self, std::size_t lo, std::size_t hi, std::size_t level) -> void {
      if (hit) return;
      if (level == depth) {
        for (std::size_t j = lo; j < hi && !hit; ++j)
          if (masks_disjoint(first.mask, all[j].mask)) hit = j;
        return;
      }
      std::size_t a = lo;
      while (a < hi && !hit) {
        std::size_t b = a;
        int link = all[a].parent_link[level];
        while (b < hi && all[b].parent_link[level] == link) ++b;
        if (link != first.parent_link[level]) self(self, a, b, level + 1);
        a = b;
      }
    };
    search(search, 0, all.size(), 0);
    if (hit) return std::pair{i, *hit};
  }
  return std::nullopt;
}

inline std::vector<int> sorted_ids(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace detail

/// Two arc-disjoint k-safe spanning arborescences, by enumerating parent arcs.
inline OracleResult oracle_arb(const RootedDigraph& d, int k, const OracleBudget& budget = {}) {
  if (k < 1) throw ContractError("k must be positive");
  const int n = d.num_vertices();
  detail::check_vertices(n, budget);
  auto safe = detail::enumerate_choices(
      n, d.root(), d.num_arcs(), budget,
      [&](VertexId v) {
        std::vector<std::pair<int, VertexId>> opts;
        for (ArcId a : d.in_arcs(v)) opts.emplace_back(a, d.tail(a));
        std::sort(opts.begin(), opts.end());
        return opts;
      },
      [&](const std::vector<VertexId>& parent) {
        auto below = detail::descendants(parent, d.root());
        for (VertexId v = 0; v < n; ++v)
          if (v != d.root() && n - (below[static_cast<std::size_t>(v)] + 1) < k) return false;
        return true;
      });
  auto pair = detail::disjoint_pair(safe);
  if (!pair) return {Decision::no, std::nullopt};
  return {Decision::yes, Witness{detail::sorted_ids(safe[pair->first].parent_link),
                                 detail::sorted_ids(safe[pair->second].parent_link), std::nullopt, std::nullopt}};
}

/// Two edge-disjoint (r,k)-safe spanning trees, by enumerating trees as
/// parent edges towards the root.
inline OracleResult oracle_tree(const RootedGraph& g, int k, const OracleBudget& budget = {}) {
  if (k < 1) throw ContractError("k must be positive");
  const int n = g.num_vertices();
  detail::check_vertices(n, budget);
  auto safe = detail::enumerate_choices(
      n, g.root(), g.num_edges(), budget,
      [&](VertexId v) {
        std::vector<std::pair<int, VertexId>> opts;
        for (EdgeId e : g.incident(v)) opts.emplace_back(e, g.other(e, v));
        std::sort(opts.begin(), opts.end());
        return opts;
      },
      [&](const std::vector<VertexId>& parent) {
        auto below = detail::descendants(parent, g.root());
        for (VertexId v = 0; v < n; ++v)
          if (v != g.root() && (n - 1) - below[static_cast<std::size_t>(v)] < k) return false;
        return true;
      });
  auto pair = detail::disjoint_pair(safe);
  if (!pair) return {Decision::no, std::nullopt};
  return {Decision::yes, Witness{detail::sorted_ids(safe[pair->first].parent_link),
                                 detail::sorted_ids(safe[pair->second].parent_link), std::nullopt, std::nullopt}};
}

/// Two arc-disjoint spanning (r,k)-flow branchings, by enumerating arc
/// bipartitions with arc 0 on the first side. Arcs left unused can always
/// join the second side, so bipartitions suffice.
inline OracleResult oracle_flow(const RootedDigraph& d, int k, const OracleBudget& budget = {}) {
  if (k < 1) throw ContractError("k must be positive");
  const int n = d.num_vertices();
  const int m = d.num_arcs();
  detail::check_vertices(n, budget);
  if (m > budget.max_arcs)
    throw BudgetExceeded("oracle budget allows " + std::to_string(budget.max_arcs) + " arcs, got " +
                         std::to_string(m));
  const auto caps = Capacity::uniform(n - k);
  const auto everything = balpack::detail::all_vertices(d);
  auto spanning_flow = [&](const std::vector<int>& ids) -> std::optional<BranchingFlow> {
    if (!balpack::detail::covers_all_vertices(d, ArcSelection(ids))) return std::nullopt;
    return balpack::detail::feasible_on(d, ids, everything, caps);
  };
  if (n == 1) return {Decision::yes, Witness{{}, {}, BranchingFlow{}, BranchingFlow{}}};
  if (m == 0) return {Decision::no, std::nullopt};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (m - 1)); ++mask) {
    std::vector<int> a1{0}, a2;
    for (int a = 1; a < m; ++a) (mask >> (a - 1) & 1u ? a1 : a2).push_back(a);
    auto z1 = spanning_flow(a1);
    if (!z1) continue;
    auto z2 = spanning_flow(a2);
    if (!z2) continue;
    return {Decision::yes, Witness{a1, a2, z1, z2}};
  }
  return {Decision::no, std::nullopt};
}

// ---------------------------------------------------------------------------
// Witness validation

namespace detail {

/// Edmonds-Karp on a dense capacity matrix.
inline std::int64_t dense_max_flow(std::vector<std::vector<std::int64_t>> cap, int s, int t) {
  const auto nn = cap.size();
  std::int64_t total = 0;
  while (true) {
    std::vector<int> prev(nn, -1);
    prev[static_cast<std::size_t>(s)] = s;
    std::queue<int> q;
    q.push(s);
    while (!q.empty() && prev[static_cast<std::size_t>(t)] < 0) {
      int u = q.front();
      q.pop();
      for (std::size_t w = 0; w < nn; ++w)
        if (prev[w] < 0 && cap[static_cast<std::size_t>(u)][w] > 0) {
          prev[w] = u;
          q.push(static_cast<int>(w));
        }
    }
    if (prev[static_cast<std::size_t>(t)] < 0) return total;
    std::int64_t push = std::numeric_limits<std::int64_t>::max();
    for (int v = t; v != s; v = prev[static_cast<std::size_t>(v)])
      push = std::min(push, cap[static_cast<std::size_t>(prev[static_cast<std::size_t>(v)])][static_cast<std::size_t>(v)]);
    for (int v = t; v != s; v = prev[static_cast<std::size_t>(v)]) {
      cap[static_cast<std::size_t>(prev[static_cast<std::size_t>(v)])][static_cast<std::size_t>(v)] -= push;
      cap[static_cast<std::size_t>(v)][static_cast<std::size_t>(prev[static_cast<std::size_t>(v)])] += push;
    }
    total += push;
  }
}

inline bool ids_ok(const std::vector<int>& ids, int universe, std::vector<int>& bad) {
  std::vector<int> seen;
  for (int id : ids) {
    if (id < 0 || id >= universe || std::count(seen.begin(), seen.end(), id)) bad.push_back(id);
    seen.push_back(id);
  }
  return bad.empty();
}

inline void check_disjoint(Verdict& v, const Witness& w) {
  std::vector<int> shared;
  for (int id : w.tree1)
    if (std::count(w.tree2.begin(), w.tree2.end(), id)) shared.push_back(id);
  v.add("disjoint", shared.empty(), shared.empty() ? "" : "structures share ids", shared);
}

inline void validate_arb(Verdict& verdict, const RootedDigraph& d, int k, const std::vector<int>& ids,
                         const std::string& label) {
  const int n = d.num_vertices();
  std::vector<int> parent_arc(static_cast<std::size_t>(n), -1);
  std::vector<int> doubled;
  for (int a : ids) {
    int h = d.head(a);
    if (parent_arc[static_cast<std::size_t>(h)] >= 0) doubled.push_back(a);
    parent_arc[static_cast<std::size_t>(h)] = a;
  }
  // Follow tree arcs downward from the root.
  std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
  for (int a : ids) children[static_cast<std::size_t>(d.tail(a))].push_back(d.head(a));
  std::vector<int> order{d.root()};
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  seen[static_cast<std::size_t>(d.root())] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c : children[static_cast<std::size_t>(order[i])])
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = 1;
        order.push_back(c);
      }
  std::vector<int> missing;
  for (int v = 0; v < n; ++v)
    if (!seen[static_cast<std::size_t>(v)]) missing.push_back(v);
  bool shape = doubled.empty() && missing.empty() && static_cast<int>(ids.size()) == n - 1;
  verdict.add(label + ":spanning-arborescence", shape,
              shape ? "" : (missing.empty() ? "a vertex has two parent arcs" : "vertices not reached from the root"),
              missing.empty() ? doubled : missing);
  if (!shape) return;
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  for (std::size_t i = order.size(); i-- > 1;) {
    int v = order[i];
    size[static_cast<std::size_t>(d.tail(parent_arc[static_cast<std::size_t>(v)]))] += size[static_cast<std::size_t>(v)];
  }
  std::vector<int> unsafe;
  for (int v = 0; v < n; ++v)
    if (v != d.root() && n - size[static_cast<std::size_t>(v)] < k) unsafe.push_back(v);
  verdict.add(label + ":k-safe", unsafe.empty(), unsafe.empty() ? "" : "branch too large below these vertices",
              unsafe);
}

inline void validate_tree(Verdict& verdict, const RootedGraph& g, int k, const std::vector<int>& ids,
                          const std::string& label) {
  const int n = g.num_vertices();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int e : ids) {
    adj[static_cast<std::size_t>(g.edge(e).u)].push_back(e);
    adj[static_cast<std::size_t>(g.edge(e).v)].push_back(e);
  }
  std::vector<int> parent(static_cast<std::size_t>(n), -1), order{g.root()};
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  seen[static_cast<std::size_t>(g.root())] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int u = order[i];
    for (int e : adj[static_cast<std::size_t>(u)]) {
      int w = g.edge(e).u == u ? g.edge(e).v : g.edge(e).u;
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      parent[static_cast<std::size_t>(w)] = u;
      order.push_back(w);
    }
  }
  std::vector<int> missing;
  for (int v = 0; v < n; ++v)
    if (!seen[static_cast<std::size_t>(v)]) missing.push_back(v);
  bool shape = missing.empty() && static_cast<int>(ids.size()) == n - 1;
  verdict.add(label + ":spanning-tree", shape,
              shape ? "" : (missing.empty() ? "edge count is not n-1" : "vertices not connected to the root"),
              missing);
  if (!shape) return;
  std::vector<int> below(static_cast<std::size_t>(n), 0);
  for (std::size_t i = order.size(); i-- > 1;) {
    int v = order[i];
    below[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])] += below[static_cast<std::size_t>(v)] + 1;
  }
  std::vector<int> unsafe;
  for (int v = 0; v < n; ++v)
    if (v != g.root() && (n - 1) - below[static_cast<std::size_t>(v)] < k) unsafe.push_back(v);
  verdict.add(label + ":k-safe", unsafe.empty(), unsafe.empty() ? "" : "too many vertices hang below these vertices",
              unsafe);
}

inline void validate_flow(Verdict& verdict, const RootedDigraph& d, int k, const std::vector<int>& ids,
                          const std::optional<BranchingFlow>& z, const std::string& label) {
  const int n = d.num_vertices();
  const std::int64_t cap = n - k;
  std::vector<char> covered(static_cast<std::size_t>(n), 0);
  covered[static_cast<std::size_t>(d.root())] = 1;
  for (int a : ids) covered[static_cast<std::size_t>(d.head(a))] = 1;
  std::vector<int> missing;
  for (int v = 0; v < n; ++v)
    if (!covered[static_cast<std::size_t>(v)]) missing.push_back(v);
  verdict.add(label + ":spanning", missing.empty(), missing.empty() ? "" : "vertices without an entering arc", missing);

  // Vertex nodes 0..n-1 plus a sink collecting one unit per non-root vertex.
  std::vector<std::vector<std::int64_t>> net(static_cast<std::size_t>(n + 1),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(n + 1), 0));
  for (int a : ids) net[static_cast<std::size_t>(d.tail(a))][static_cast<std::size_t>(d.head(a))] += std::max<std::int64_t>(0, cap);
  for (int v = 0; v < n; ++v)
    if (v != d.root()) net[static_cast<std::size_t>(v)][static_cast<std::size_t>(n)] += 1;
  bool feasible = dense_max_flow(std::move(net), d.root(), n) == n - 1;
  verdict.add(label + ":flow-feasible", feasible,
              feasible ? "" : "no branching flow within capacity " + std::to_string(cap));

  if (!z) return;
  std::vector<int> bad;
  std::vector<std::int64_t> net_in(static_cast<std::size_t>(n), 0);
  for (auto [a, value] : z->values) {
    if (std::find(ids.begin(), ids.end(), a) == ids.end() || value < 0 || value > cap) {
      bad.push_back(a);
      continue;
    }
    net_in[static_cast<std::size_t>(d.head(a))] += value;
    net_in[static_cast<std::size_t>(d.tail(a))] -= value;
  }
  for (int v = 0; v < n; ++v)
    if (v != d.root() && net_in[static_cast<std::size_t>(v)] != 1) bad.push_back(-1 - v);
  verdict.add(label + ":flow-values", bad.empty(),
              bad.empty() ? "" : "flow off the structure, out of range, or not conserving (vertex v as -1-v)", bad);
}

}  // namespace detail

/// Checks a witness against the instance (kind and k taken from it).
inline Verdict validate_witness(const ProblemInstance& inst, const Witness& w) {
  Verdict verdict;
  const int universe = inst.directed() ? inst.digraph().num_arcs() : inst.undirected().num_edges();
  std::vector<int> bad1, bad2;
  bool ok1 = detail::ids_ok(w.tree1, universe, bad1);
  bool ok2 = detail::ids_ok(w.tree2, universe, bad2);
  verdict.add("tree1:ids", ok1, ok1 ? "" : "unknown or repeated ids", bad1);
  verdict.add("tree2:ids", ok2, ok2 ? "" : "unknown or repeated ids", bad2);
  if (!ok1 || !ok2) return verdict;
  if (inst.kind == ProblemKind::tree && inst.directed())
    throw ContractError("tree witnesses need an undirected instance");
  if (inst.kind != ProblemKind::tree && !inst.directed())
    throw ContractError("arborescence and flow witnesses need a directed instance");
  detail::check_disjoint(verdict, w);
  switch (inst.kind) {
    case ProblemKind::arb:
      detail::validate_arb(verdict, inst.digraph(), inst.k, w.tree1, "tree1");
      detail::validate_arb(verdict, inst.digraph(), inst.k, w.tree2, "tree2");
      break;
    case ProblemKind::tree:
      detail::validate_tree(verdict, inst.undirected(), inst.k, w.tree1, "tree1");
      detail::validate_tree(verdict, inst.undirected(), inst.k, w.tree2, "tree2");
      break;
    case ProblemKind::flow:
      detail::validate_flow(verdict, inst.digraph(), inst.k, w.tree1, w.flow1, "tree1");
      detail::validate_flow(verdict, inst.digraph(), inst.k, w.tree2, w.flow2, "tree2");
      break;
  }
  return verdict;
}

}  // namespace balpack::oracle
