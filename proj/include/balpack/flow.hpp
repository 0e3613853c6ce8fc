#pragma once

// Branching flows: feasibility by a single max-flow against unit demands,
// recognition of spanning (r,k)-flow branchings, path/cycle decomposition and
// arc-minimal pruning.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "balpack/connectivity.hpp"
#include "balpack/errors.hpp"
#include "balpack/graph.hpp"

namespace balpack {

/// Capacity function: either uniform or one value per arc id of the parent
/// digraph.
class Capacity {
 public:
  static Capacity uniform(std::int64_t c) { return Capacity(c, {}); }
  static Capacity per_arc(std::vector<std::int64_t> caps) { return Capacity(0, std::move(caps)); }

  std::int64_t of(ArcId a) const {
    return per_arc_.empty() ? uniform_ : per_arc_[static_cast<std::size_t>(a)];
  }
  bool is_uniform() const { return per_arc_.empty(); }

 private:
  Capacity(std::int64_t u, std::vector<std::int64_t> p) : uniform_(u), per_arc_(std::move(p)) {}
  std::int64_t uniform_;
  std::vector<std::int64_t> per_arc_;
};

/// Integral flow on the arcs of a selection, sorted by arc id.
struct BranchingFlow {
  std::vector<std::pair<ArcId, std::int64_t>> values;

  std::int64_t value(ArcId a) const {
    auto it = std::lower_bound(values.begin(), values.end(), std::pair<ArcId, std::int64_t>{a, 0},
                               [](const auto& x, const auto& y) { return x.first < y.first; });
    return it != values.end() && it->first == a ? it->second : 0;
  }
};

struct PathFlow {
  VertexId target;
  std::vector<ArcId> arcs;  // r -> target, in path order
};

struct CycleFlow {
  std::vector<ArcId> arcs;  // in cycle order
};

struct FlowDecomposition {
  std::vector<PathFlow> paths;  // one per non-root vertex, ascending target
  std::vector<CycleFlow> cycles;
};

namespace detail {

/// Feasibility over an explicit vertex set: every vertex of `vertices` except
/// the root absorbs one unit, the root emits the rest.
inline std::optional<BranchingFlow> feasible_on(const RootedDigraph& d,
                                                const std::vector<ArcId>& arcs,
                                                const std::vector<VertexId>& vertices,
                                                const Capacity& caps) {
  const int n = d.num_vertices();
  const int sink = n;
  FlowNetwork net(n + 1, d.root(), sink);
  std::vector<char> member(static_cast<std::size_t>(n), 0);
  for (VertexId v : vertices) member[static_cast<std::size_t>(v)] = 1;
  std::vector<int> link_of(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc& a = d.arc(arcs[i]);
    if (!member[static_cast<std::size_t>(a.tail)] || !member[static_cast<std::size_t>(a.head)])
      throw ContractError("arc leaves the vertex set of the flow branching");
    link_of[i] = net.add_link(a.tail, a.head, std::max<std::int64_t>(0, caps.of(arcs[i])));
  }
  std::int64_t demand = 0;
  for (VertexId v : vertices)
    if (v != d.root()) {
      net.add_link(v, sink, 1);
      ++demand;
    }
  auto res = max_flow(net, demand);
  if (res.value != demand) return std::nullopt;
  BranchingFlow z;
  for (std::size_t i = 0; i < arcs.size(); ++i)
    z.values.emplace_back(arcs[i], res.flow[static_cast<std::size_t>(link_of[i])]);
  std::sort(z.values.begin(), z.values.end());
  return z;
}

inline std::vector<VertexId> all_vertices(const RootedDigraph& d) {
  std::vector<VertexId> v(static_cast<std::size_t>(d.num_vertices()));
  for (int i = 0; i < d.num_vertices(); ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

inline bool covers_all_vertices(const RootedDigraph& d, const ArcSelection& sel) {
  std::vector<char> hit(static_cast<std::size_t>(d.num_vertices()), 0);
  hit[static_cast<std::size_t>(d.root())] = 1;
  for (ArcId a : sel) hit[static_cast<std::size_t>(d.head(a))] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

}  // namespace detail

/// A witness flow on the sub-digraph formed by `sel` (vertex set = endpoints
/// plus root) under `caps`, or nullopt if none exists.
inline std::optional<BranchingFlow> branching_flow_feasible(const RootedDigraph& d,
                                                            const ArcSelection& sel,
                                                            const Capacity& caps) {
  return detail::feasible_on(d, sel.ids(), selection_vertices(d, sel), caps);
}

/// Same, for the whole digraph.
inline std::optional<BranchingFlow> branching_flow_feasible(const RootedDigraph& d,
                                                            const Capacity& caps) {
  return detail::feasible_on(d, d.all_arcs().ids(), detail::all_vertices(d), caps);
}

/// The selection spans D and carries an (r,k)-branching flow with uniform
/// capacity n - k, n being the vertex count of D.
inline bool is_spanning_rk_flow_branching(const RootedDigraph& d, const ArcSelection& sel, int k) {
  if (!detail::covers_all_vertices(d, sel)) return false;
  return detail::feasible_on(d, sel.ids(), detail::all_vertices(d),
                             Capacity::uniform(d.num_vertices() - k))
      .has_value();
}

/// Splits a branching flow into one r->v path flow per non-root vertex and
/// unit cycle flows. Paths are extracted first, each a BFS path through the
/// remaining support in canonical arc order.
inline FlowDecomposition decompose_flow(const RootedDigraph& d, const ArcSelection& sel,
                                        const BranchingFlow& z) {
  const auto n = static_cast<std::size_t>(d.num_vertices());
  std::vector<std::int64_t> rest(static_cast<std::size_t>(d.num_arcs()), 0);
  for (auto [a, value] : z.values) {
    if (!sel.contains(a)) throw ContractError("flow on an arc outside the selection");
    if (value < 0) throw ContractError("negative flow value");
    rest[static_cast<std::size_t>(a)] = value;
  }
  auto verts = selection_vertices(d, sel);
  std::vector<std::int64_t> net_in(n, 0);
  for (auto [a, value] : z.values) {
    net_in[static_cast<std::size_t>(d.head(a))] += value;
    net_in[static_cast<std::size_t>(d.tail(a))] -= value;
  }
  for (VertexId v : verts) {
    std::int64_t want = v == d.root() ? -static_cast<std::int64_t>(verts.size() - 1) : 1;
    if (net_in[static_cast<std::size_t>(v)] != want)
      throw ContractError("flow violates conservation at vertex " + std::to_string(v));
  }

  FlowDecomposition out;
  std::vector<ArcId> via(n);
  std::vector<char> seen(n);
  for (VertexId target : verts) {
    if (target == d.root()) continue;
    std::fill(via.begin(), via.end(), -1);
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<VertexId> queue{d.root()};
    seen[static_cast<std::size_t>(d.root())] = 1;
    for (std::size_t qi = 0; qi < queue.size() && !seen[static_cast<std::size_t>(target)]; ++qi) {
      for (ArcId a : d.out_arcs(queue[qi])) {
        if (rest[static_cast<std::size_t>(a)] <= 0) continue;
        VertexId h = d.head(a);
        if (seen[static_cast<std::size_t>(h)]) continue;
        seen[static_cast<std::size_t>(h)] = 1;
        via[static_cast<std::size_t>(h)] = a;
        queue.push_back(h);
      }
    }
    if (!seen[static_cast<std::size_t>(target)])
      throw InvariantViolation("flow support does not reach vertex " + std::to_string(target));
    PathFlow p{target, {}};
    for (VertexId v = target; v != d.root(); v = d.tail(via[static_cast<std::size_t>(v)]))
      p.arcs.push_back(via[static_cast<std::size_t>(v)]);
    std::reverse(p.arcs.begin(), p.arcs.end());
    for (ArcId a : p.arcs) --rest[static_cast<std::size_t>(a)];
    out.paths.push_back(std::move(p));
  }

  // What is left is a circulation; peel unit cycles.
  auto order = d.canonical_order();
  std::vector<int> pos(n);
  for (ArcId start : order) {
    while (rest[static_cast<std::size_t>(start)] > 0) {
      std::fill(pos.begin(), pos.end(), -1);
      std::vector<ArcId> walk{start};
      pos[static_cast<std::size_t>(d.tail(start))] = 0;
      VertexId v = d.head(start);
      while (pos[static_cast<std::size_t>(v)] < 0) {
        pos[static_cast<std::size_t>(v)] = static_cast<int>(walk.size());
        ArcId next = -1;
        for (ArcId a : d.out_arcs(v))
          if (rest[static_cast<std::size_t>(a)] > 0) {
            next = a;
            break;
          }
        if (next < 0) throw InvariantViolation("residual flow is not a circulation");
        walk.push_back(next);
        v = d.head(next);
      }
      CycleFlow c;
      c.arcs.assign(walk.begin() + pos[static_cast<std::size_t>(v)], walk.end());
      for (ArcId a : c.arcs) --rest[static_cast<std::size_t>(a)];
      out.cycles.push_back(std::move(c));
    }
  }
  return out;
}

/// Inclusion-minimal sub-selection of the (r,k)-flow branching `sel` that is
/// still one on the same vertex set (capacity |V(X)| - k). Arcs are tried for
/// removal once each in canonical order; feasibility is monotone, so one pass
/// is enough.
inline ArcSelection minimize_flow_branching(const RootedDigraph& d, const ArcSelection& sel, int k) {
  const auto verts = selection_vertices(d, sel);
  const auto caps = Capacity::uniform(static_cast<std::int64_t>(verts.size()) - k);
  if (!detail::feasible_on(d, sel.ids(), verts, caps))
    throw ContractError("minimize_flow_branching: input is not an (r,k)-flow branching");
  std::vector<ArcId> order = sel.ids();
  std::sort(order.begin(), order.end(), [&](ArcId x, ArcId y) {
    return std::tuple(d.tail(x), d.head(x), x) < std::tuple(d.tail(y), d.head(y), y);
  });
  ArcSelection current = sel;
  for (ArcId a : order) {
    ArcSelection trial = current;
    trial.erase(a);
    if (detail::feasible_on(d, trial.ids(), verts, caps)) current = std::move(trial);
  }
  return current;
}

/// No three same-direction arcs between one ordered pair.
inline bool is_triple_free(const RootedDigraph& d, const ArcSelection& sel) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (ArcId a : sel) pairs.emplace_back(d.tail(a), d.head(a));
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 2; i < pairs.size(); ++i)
    if (pairs[i] == pairs[i - 2]) return false;
  return true;
}

}  // namespace balpack
