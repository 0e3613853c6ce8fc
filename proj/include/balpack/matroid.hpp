#pragma once

// Union of two graphic matroids with forced (contracted) forests. One
// partition engine answers completability, produces completions and decides
// whether two edge-disjoint spanning trees exist. Also builds tree-mapping
// functions between two spanning trees.

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "balpack/errors.hpp"
#include "balpack/graph.hpp"

namespace balpack {

namespace detail {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    return true;
  }
};

}  // namespace detail

/// Graphic matroid of G with the forest F contracted: S is independent iff
/// S together with F is a forest.
class ForcedForestContext {
 public:
  ForcedForestContext(const RootedGraph& g, const EdgeSelection& forced) : g_(&g), forced_(forced) {
    detail::DisjointSets ds(g.num_vertices());
    for (EdgeId e : forced) {
      if (e < 0 || e >= g.num_edges()) throw ContractError("forced edge id out of range");
      if (!ds.unite(g.edge(e).u, g.edge(e).v)) throw ContractError("forced edges contain a cycle");
    }
    label_.resize(static_cast<std::size_t>(g.num_vertices()));
    for (VertexId v = 0; v < g.num_vertices(); ++v) label_[static_cast<std::size_t>(v)] = ds.find(v);
  }

  const EdgeSelection& forced() const noexcept { return forced_; }
  /// Contracted vertex of v (smallest vertex of its forced component).
  int label(VertexId v) const { return label_[static_cast<std::size_t>(v)]; }
  /// Edges still needed for a spanning tree containing F.
  int target_rank() const { return g_->num_vertices() - 1 - static_cast<int>(forced_.size()); }

  bool independent(const EdgeSelection& s) const {
    detail::DisjointSets ds(g_->num_vertices());
    for (EdgeId e : s) {
      if (forced_.contains(e)) return false;
      if (!ds.unite(label(g_->edge(e).u), label(g_->edge(e).v))) return false;
    }
    return true;
  }

 private:
  const RootedGraph* g_;
  EdgeSelection forced_;
  std::vector<int> label_;
};

namespace detail {

/// Spanning forest over contracted labels with parent pointers, for circuit
/// queries.
struct LabelForest {
  std::vector<int> parent_edge;  // element index, -1 at component roots
  std::vector<int> parent;
  std::vector<int> depth;
  std::vector<int> comp;
};

struct PartitionResult {
  std::array<std::vector<EdgeId>, 2> parts;
  bool complete = false;
};

/// Matroid partition by shortest augmenting paths over the exchange graph.
/// Ground set: edges outside both forced forests. Side i is independent iff
/// acyclic after contracting forced forest i.
inline PartitionResult partition(const RootedGraph& g, const ForcedForestContext& c0,
                                 const ForcedForestContext& c1,
                                 const std::array<const EdgeSelection*, 2>& hint) {
  const int n = g.num_vertices();
  const std::array<const ForcedForestContext*, 2> ctx{&c0, &c1};
  std::vector<EdgeId> ground;
  for (EdgeId e : g.canonical_order())
    if (!c0.forced().contains(e) && !c1.forced().contains(e)) ground.push_back(e);
  const int m = static_cast<int>(ground.size());
  const int target = c0.target_rank() + c1.target_rank();
  PartitionResult out;

  // ends[i][x]: contracted endpoints of element x for side i.
  std::array<std::vector<std::pair<int, int>>, 2> ends;
  for (int i = 0; i < 2; ++i) {
    ends[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(m));
    for (int x = 0; x < m; ++x) {
      const Edge& ed = g.edge(ground[static_cast<std::size_t>(x)]);
      ends[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)] = {ctx[static_cast<std::size_t>(i)]->label(ed.u),
                                                                         ctx[static_cast<std::size_t>(i)]->label(ed.v)};
    }
  }
  std::vector<int> where(static_cast<std::size_t>(m), -1);
  std::array<int, 2> size{0, 0};

  // Greedy start: hinted edges first, then everything in canonical order.
  {
    std::array<DisjointSets, 2> ds{DisjointSets(n), DisjointSets(n)};
    auto try_place = [&](int x, int i) {
      auto [a, b] = ends[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
      if (size[static_cast<std::size_t>(i)] >= ctx[static_cast<std::size_t>(i)]->target_rank()) return false;
      if (!ds[static_cast<std::size_t>(i)].unite(a, b)) return false;
      where[static_cast<std::size_t>(x)] = i;
      ++size[static_cast<std::size_t>(i)];
      return true;
    };
    for (int i = 0; i < 2; ++i) {
      if (!hint[static_cast<std::size_t>(i)]) continue;
      for (int x = 0; x < m; ++x)
        if (where[static_cast<std::size_t>(x)] < 0 && hint[static_cast<std::size_t>(i)]->contains(ground[static_cast<std::size_t>(x)]))
          try_place(x, i);
    }
    for (int x = 0; x < m; ++x)
      if (where[static_cast<std::size_t>(x)] < 0 && !try_place(x, 0)) try_place(x, 1);
  }

  auto build_forest = [&](int i) {
    LabelForest f{std::vector<int>(static_cast<std::size_t>(n), -1), std::vector<int>(static_cast<std::size_t>(n), -1),
                  std::vector<int>(static_cast<std::size_t>(n), 0), std::vector<int>(static_cast<std::size_t>(n), -1)};
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int x = 0; x < m; ++x)
      if (where[static_cast<std::size_t>(x)] == i) {
        auto [a, b] = ends[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
        adj[static_cast<std::size_t>(a)].push_back(x);
        adj[static_cast<std::size_t>(b)].push_back(x);
      }
    std::vector<int> queue;
    for (int s = 0; s < n; ++s) {
      if (f.comp[static_cast<std::size_t>(s)] >= 0) continue;
      f.comp[static_cast<std::size_t>(s)] = s;
      queue.assign(1, s);
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (int x : adj[static_cast<std::size_t>(u)]) {
          auto [a, b] = ends[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
          int w = a == u ? b : a;
          if (f.comp[static_cast<std::size_t>(w)] >= 0) continue;
          f.comp[static_cast<std::size_t>(w)] = s;
          f.parent[static_cast<std::size_t>(w)] = u;
          f.parent_edge[static_cast<std::size_t>(w)] = x;
          f.depth[static_cast<std::size_t>(w)] = f.depth[static_cast<std::size_t>(u)] + 1;
          queue.push_back(w);
        }
      }
    }
    return f;
  };

  std::vector<int> pred(static_cast<std::size_t>(m));
  std::vector<char> seen(static_cast<std::size_t>(m));
  while (size[0] + size[1] < target) {
    std::array<LabelForest, 2> forest{build_forest(0), build_forest(1)};
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<int> queue;
    for (int x = 0; x < m; ++x)
      if (where[static_cast<std::size_t>(x)] < 0) {
        queue.push_back(x);
        seen[static_cast<std::size_t>(x)] = 1;
      }
    int sink = -1;
    int sink_side = -1;
    for (std::size_t qi = 0; qi < queue.size() && sink < 0; ++qi) {
      int x = queue[qi];
      for (int i = 0; i < 2 && sink < 0; ++i) {
        if (where[static_cast<std::size_t>(x)] == i) continue;
        auto [a, b] = ends[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
        if (a == b) continue;
        const LabelForest& f = forest[static_cast<std::size_t>(i)];
        if (f.comp[static_cast<std::size_t>(a)] != f.comp[static_cast<std::size_t>(b)]) {
          if (size[static_cast<std::size_t>(i)] < ctx[static_cast<std::size_t>(i)]->target_rank()) {
            sink = x;
            sink_side = i;
          }
          continue;
        }
        // Fundamental circuit of x in forest i.
        auto visit = [&](int y) {
          if (seen[static_cast<std::size_t>(y)]) return;
          seen[static_cast<std::size_t>(y)] = 1;
          pred[static_cast<std::size_t>(y)] = x;
          queue.push_back(y);
        };
        while (a != b) {
          if (f.depth[static_cast<std::size_t>(a)] < f.depth[static_cast<std::size_t>(b)]) std::swap(a, b);
          visit(f.parent_edge[static_cast<std::size_t>(a)]);
          a = f.parent[static_cast<std::size_t>(a)];
        }
      }
    }
    if (sink < 0) break;
    // Shift every element on the path one step.
    int cur = sink;
    int side = sink_side;
    ++size[static_cast<std::size_t>(sink_side)];
    while (true) {
      int old = where[static_cast<std::size_t>(cur)];
      where[static_cast<std::size_t>(cur)] = side;
      if (old < 0) break;
      side = old;
      cur = pred[static_cast<std::size_t>(cur)];
    }
  }
  for (int x = 0; x < m; ++x)
    if (where[static_cast<std::size_t>(x)] >= 0)
      out.parts[static_cast<std::size_t>(where[static_cast<std::size_t>(x)])].push_back(ground[static_cast<std::size_t>(x)]);
  out.complete = size[0] + size[1] == target;
  return out;
}

inline void check_forest_pair(const EdgeSelection& x1, const EdgeSelection& x2) {
  if (!x1.disjoint_from(x2)) throw ContractError("forced forests share an edge");
}

}  // namespace detail

/// Edge-disjoint spanning trees T1 ⊇ X1 and T2 ⊇ X2, or nothing if the pair
/// is not completable. `hint` seeds the search with a previous solution.
inline std::optional<std::pair<EdgeSelection, EdgeSelection>> find_disjoint_bases(
    const RootedGraph& g, const EdgeSelection& x1, const EdgeSelection& x2,
    const std::optional<std::pair<EdgeSelection, EdgeSelection>>& hint = std::nullopt) {
  detail::check_forest_pair(x1, x2);
  ForcedForestContext c1(g, x1), c2(g, x2);
  if (g.num_edges() - static_cast<int>(x1.size() + x2.size()) < c1.target_rank() + c2.target_rank())
    return std::nullopt;
  std::array<const EdgeSelection*, 2> h{nullptr, nullptr};
  if (hint) h = {&hint->first, &hint->second};
  auto res = detail::partition(g, c1, c2, h);
  if (!res.complete) return std::nullopt;
  std::vector<int> t1(x1.begin(), x1.end());
  std::vector<int> t2(x2.begin(), x2.end());
  t1.insert(t1.end(), res.parts[0].begin(), res.parts[0].end());
  t2.insert(t2.end(), res.parts[1].begin(), res.parts[1].end());
  return std::pair{EdgeSelection(std::move(t1)), EdgeSelection(std::move(t2))};
}

inline bool is_completable_pair(const RootedGraph& g, const EdgeSelection& x1, const EdgeSelection& x2) {
  return find_disjoint_bases(g, x1, x2).has_value();
}

/// Largest |I1| + |I2| with I_i independent in the graphic matroid of G with
/// X_i contracted and I1, I2, X1, X2 pairwise disjoint.
inline int union_rank(const RootedGraph& g, const EdgeSelection& x1 = {}, const EdgeSelection& x2 = {}) {
  detail::check_forest_pair(x1, x2);
  ForcedForestContext c1(g, x1), c2(g, x2);
  auto res = detail::partition(g, c1, c2, {nullptr, nullptr});
  return static_cast<int>(res.parts[0].size() + res.parts[1].size());
}

inline bool has_two_disjoint_spanning_trees(const RootedGraph& g) {
  return is_completable_pair(g, {}, {});
}

/// σ from the edges of T1 to the edges of T2, sorted by the T1 edge.
struct TreeMapping {
  std::vector<std::pair<EdgeId, EdgeId>> sigma;
  bool bijective = true;

  EdgeId operator()(EdgeId e) const {
    auto it = std::lower_bound(sigma.begin(), sigma.end(), std::pair<EdgeId, EdgeId>{e, -1});
    if (it == sigma.end() || it->first != e) throw ContractError("edge is not in T1");
    return it->second;
  }
};

namespace detail {

struct TreePaths {
  std::vector<VertexId> parent;
  std::vector<EdgeId> parent_edge;
  std::vector<int> depth;

  TreePaths(const RootedGraph& g, const EdgeSelection& t) {
    const auto n = static_cast<std::size_t>(g.num_vertices());
    parent.assign(n, -1);
    parent_edge.assign(n, -1);
    depth.assign(n, 0);
    std::vector<std::vector<EdgeId>> adj(n);
    for (EdgeId e : t) {
      adj[static_cast<std::size_t>(g.edge(e).u)].push_back(e);
      adj[static_cast<std::size_t>(g.edge(e).v)].push_back(e);
    }
    std::vector<char> seen(n, 0);
    std::vector<VertexId> queue{g.root()};
    seen[static_cast<std::size_t>(g.root())] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      VertexId u = queue[qi];
      for (EdgeId e : adj[static_cast<std::size_t>(u)]) {
        VertexId w = g.other(e, u);
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        parent[static_cast<std::size_t>(w)] = u;
        parent_edge[static_cast<std::size_t>(w)] = e;
        depth[static_cast<std::size_t>(w)] = depth[static_cast<std::size_t>(u)] + 1;
        queue.push_back(w);
      }
    }
  }

  std::vector<EdgeId> path(VertexId a, VertexId b) const {
    std::vector<EdgeId> out;
    while (a != b) {
      if (depth[static_cast<std::size_t>(a)] < depth[static_cast<std::size_t>(b)]) std::swap(a, b);
      out.push_back(parent_edge[static_cast<std::size_t>(a)]);
      a = parent[static_cast<std::size_t>(a)];
    }
    return out;
  }
};

inline bool is_spanning_tree(const RootedGraph& g, const EdgeSelection& t) {
  return static_cast<int>(t.size()) == g.num_vertices() - 1 && is_rooted_tree(g, t);
}

}  // namespace detail

/// A tree-mapping function from T1 to T2: for every e in T1, both T1-e+σ(e)
/// and T2-σ(e)+e are spanning trees. Shared edges map to themselves; the rest
/// come from a perfect matching of admissible exchanges when one exists.
inline TreeMapping tree_mapping(const RootedGraph& g, const EdgeSelection& t1, const EdgeSelection& t2) {
  if (!detail::is_spanning_tree(g, t1) || !detail::is_spanning_tree(g, t2))
    throw ContractError("tree_mapping needs two spanning trees");
  detail::TreePaths p1(g, t1), p2(g, t2);
  std::vector<EdgeId> only1, only2;
  for (EdgeId e : t1)
    if (!t2.contains(e)) only1.push_back(e);
  for (EdgeId f : t2)
    if (!t1.contains(f)) only2.push_back(f);

  const std::size_t s = only1.size();
  std::vector<std::vector<int>> adm(s);
  for (std::size_t i = 0; i < s; ++i) {
    EdgeId e = only1[i];
    auto cycle2 = p2.path(g.edge(e).u, g.edge(e).v);
    for (std::size_t j = 0; j < s; ++j) {
      EdgeId f = only2[j];
      if (std::find(cycle2.begin(), cycle2.end(), f) == cycle2.end()) continue;
      auto cycle1 = p1.path(g.edge(f).u, g.edge(f).v);
      if (std::find(cycle1.begin(), cycle1.end(), e) != cycle1.end()) adm[i].push_back(static_cast<int>(j));
    }
    if (adm[i].empty()) throw InvariantViolation("edge without a symmetric exchange partner");
  }

  // Kuhn's augmenting paths.
  std::vector<int> match_right(s, -1), match_left(s, -1);
  std::vector<char> used;
  auto try_kuhn = [&](auto&& self, int i) -> bool {
    for (int j : adm[static_cast<std::size_t>(i)]) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = 1;
      if (match_right[static_cast<std::size_t>(j)] < 0 || self(self, match_right[static_cast<std::size_t>(j)])) {
        match_right[static_cast<std::size_t>(j)] = i;
        match_left[static_cast<std::size_t>(i)] = j;
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < s; ++i) {
    used.assign(s, 0);
    try_kuhn(try_kuhn, static_cast<int>(i));
  }

  TreeMapping out;
  for (EdgeId e : t1)
    if (t2.contains(e)) out.sigma.emplace_back(e, e);
  for (std::size_t i = 0; i < s; ++i) {
    int j = match_left[i];
    if (j < 0) {
      out.bijective = false;
      j = adm[i].front();
    }
    out.sigma.emplace_back(only1[i], only2[static_cast<std::size_t>(j)]);
  }
  std::sort(out.sigma.begin(), out.sigma.end());

  // Three T1-edges at one vertex never share a single image.
  std::vector<std::pair<VertexId, EdgeId>> at;
  for (auto [e, f] : out.sigma) {
    at.emplace_back(g.edge(e).u, f);
    at.emplace_back(g.edge(e).v, f);
  }
  std::sort(at.begin(), at.end());
  for (std::size_t i = 2; i < at.size(); ++i)
    if (at[i] == at[i - 2]) throw InvariantViolation("tree mapping sends three edges at a vertex to one edge");
  return out;
}

}  // namespace balpack
