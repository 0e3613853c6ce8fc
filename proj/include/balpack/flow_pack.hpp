#pragma once

// Two arc-disjoint spanning (r,k)-flow branchings: compact cores, growth to
// classic cores, completion with explicit flow routing, and the solver.

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "balpack/connectivity.hpp"
#include "balpack/errors.hpp"
#include "balpack/flow.hpp"
#include "balpack/fpt_common.hpp"
#include "balpack/graph.hpp"
#include "balpack/report.hpp"
#include "balpack/solve_support.hpp"

namespace balpack {

using CompactCore = fpt::CompactStructure<ArcSelection>;

/// Every valid core, or only those that lose validity when any single arc
/// is dropped while keeping their vertex set. Validity is monotone in the
/// arcs for a fixed vertex set, so every valid core contains a minimal one.
enum class CoreEnumeration { all, minimal };

namespace detail {

/// Attachment of a core with vertex set `verts` (non-root) and arcs `arcs`:
/// arcs carry at most k, each vertex absorbs one unit, and the missing
/// 2k-1-|V'| units drain through large vertices into one shared super-leaf.
inline std::optional<fpt::Attachment> core_attachment(const RootedDigraph& d, int k, const fpt::LargenessView& view,
                                                      const std::vector<ArcId>& arcs,
                                                      const std::vector<VertexId>& verts) {
  const int missing = 2 * k - 1 - static_cast<int>(verts.size());
  if (missing < 0) return std::nullopt;
  std::vector<VertexId> large;
  for (VertexId v : verts)
    if (view.is_large(v)) large.push_back(v);
  if (missing > 0 && large.empty()) return std::nullopt;
  const int n = d.num_vertices();
  const int leaf = n, sink = n + 1;
  FlowNetwork net(n + 2, d.root(), sink);
  for (ArcId a : arcs) net.add_link(d.tail(a), d.head(a), k);
  for (VertexId v : verts) net.add_link(v, sink, 1);
  std::vector<int> link_of(large.size());
  for (std::size_t i = 0; i < large.size(); ++i) link_of[i] = net.add_link(large[i], leaf, missing);
  net.add_link(leaf, sink, missing);
  const std::int64_t demand = static_cast<std::int64_t>(verts.size()) + missing;
  auto res = max_flow(net, demand);
  if (res.value != demand) return std::nullopt;
  fpt::Attachment att;
  for (std::size_t i = 0; i < large.size(); ++i)
    att.leaves.emplace_back(large[i], static_cast<int>(res.flow[static_cast<std::size_t>(link_of[i])]));
  return att;
}

inline bool copies_at_most_two(const RootedDigraph& d, const ArcSelection& x) {
  std::map<std::pair<VertexId, VertexId>, int> count;
  for (ArcId a : x)
    if (++count[{d.tail(a), d.head(a)}] > 2) return false;
  return true;
}

}  // namespace detail

inline fpt::LargenessView classify_vertices_flow(const RootedDigraph& d, int k) {
  return fpt::classify_vertices_flow(d, k);
}

/// Vertices reachable from r along paths of length at most 2k-1 with small
/// interior vertices.
inline std::vector<VertexId> candidate_pool_flow(const RootedDigraph& d, int k) {
  return fpt::candidate_pool(d, fpt::classify_vertices_flow(d, k), 2 * k - 1);
}

/// Attachment witness if X is a compact core: at most 2k-1 non-root
/// vertices, at most two parallel copies per ordered pair, large vertices are
/// sinks, and leaves hung below large vertices complete it to an
/// (r,k)-flow branching on 2k vertices.
inline std::optional<fpt::Attachment> validate_compact_core(const RootedDigraph& d, int k,
                                                            const fpt::LargenessView& view, const ArcSelection& x) {
  for (ArcId a : x)
    if (a < 0 || a >= d.num_arcs()) return std::nullopt;
  auto verts = selection_vertices(d, x);
  verts.erase(std::remove(verts.begin(), verts.end(), d.root()), verts.end());
  if (static_cast<int>(verts.size()) > 2 * k - 1) return std::nullopt;
  if (!detail::copies_at_most_two(d, x)) return std::nullopt;
  for (ArcId a : x)
    if (d.tail(a) != d.root() && view.is_large(d.tail(a))) return std::nullopt;
  return detail::core_attachment(d, k, view, x.ids(), verts);
}

inline std::optional<fpt::Attachment> validate_compact_core(const RootedDigraph& d, int k, const ArcSelection& x) {
  return validate_compact_core(d, k, fpt::classify_vertices_flow(d, k), x);
}

/// 2k-1 non-root vertices carrying an (r,k)-flow branching with capacity k.
inline bool is_classic_core(const RootedDigraph& d, int k, const ArcSelection& x) {
  auto verts = selection_vertices(d, x);
  if (static_cast<int>(verts.size()) != 2 * k) return false;
  return branching_flow_feasible(d, x, Capacity::uniform(k)).has_value();
}

/// Compact cores with vertices in `pool`, sorted by arc ids. Vertex sets are
/// grown from the root through the root and small vertices; arc subsets are
/// then chosen with an upper-bound feasibility cut.
inline std::vector<CompactCore> enumerate_compact_cores(const RootedDigraph& d, int k, const fpt::LargenessView& view,
                                                        const std::vector<VertexId>& pool,
                                                        CoreEnumeration mode = CoreEnumeration::minimal) {
  const auto n = static_cast<std::size_t>(d.num_vertices());
  const int max_vertices = 2 * k - 1;
  std::vector<char> in_pool(n, 0);
  for (VertexId v : pool) in_pool[static_cast<std::size_t>(v)] = 1;
  auto expandable = [&](VertexId u) { return u == d.root() || !view.is_large(u); };
  std::vector<CompactCore> out;

  auto arcs_for = [&](const std::vector<VertexId>& set) {
    std::vector<char> member(n, 0);
    for (VertexId v : set) member[static_cast<std::size_t>(v)] = 1;
    std::vector<ArcId> arcs;
    for (ArcId a : d.canonical_order()) {
      VertexId t = d.tail(a), h = d.head(a);
      if (!member[static_cast<std::size_t>(h)]) continue;
      if (t != d.root() && !member[static_cast<std::size_t>(t)]) continue;
      if (expandable(t)) arcs.push_back(a);
    }
    return arcs;
  };

  auto process = [&](std::vector<VertexId> set) {
    std::sort(set.begin(), set.end());
    const auto arcs = arcs_for(set);
    auto feasible = [&](const std::vector<ArcId>& chosen) {
      return detail::core_attachment(d, k, view, chosen, set);
    };
    if (!feasible(arcs)) return;
    std::vector<char> covered(n, 0);
    auto covers = [&](const std::vector<ArcId>& chosen) {
      std::fill(covered.begin(), covered.end(), 0);
      for (ArcId a : chosen) covered[static_cast<std::size_t>(d.head(a))] = 1;
      for (VertexId v : set)
        if (!covered[static_cast<std::size_t>(v)]) return false;
      return true;
    };
    std::map<std::pair<VertexId, VertexId>, int> copies;
    std::vector<ArcId> chosen;
    auto emit = [&](const fpt::Attachment& att) {
      out.push_back({ArcSelection(std::vector<ArcId>(chosen)), set, att});
    };
    auto rec = [&](auto&& self, std::size_t idx) -> void {
      if (mode == CoreEnumeration::minimal && covers(chosen)) {
        if (auto att = feasible(chosen)) {
          bool minimal = true;
          for (std::size_t i = 0; i < chosen.size() && minimal; ++i) {
            std::vector<ArcId> less = chosen;
            less.erase(less.begin() + static_cast<std::ptrdiff_t>(i));
            if (covers(less) && feasible(less)) minimal = false;
          }
          if (minimal) emit(*att);
          return;
        }
      }
      if (idx == arcs.size()) {
        if (mode == CoreEnumeration::all && covers(chosen))
          if (auto att = feasible(chosen)) emit(*att);
        return;
      }
      std::vector<ArcId> upper = chosen;
      upper.insert(upper.end(), arcs.begin() + static_cast<std::ptrdiff_t>(idx), arcs.end());
      if (!feasible(upper)) return;
      ArcId a = arcs[idx];
      auto key = std::pair(d.tail(a), d.head(a));
      if (copies[key] < 2) {
        ++copies[key];
        chosen.push_back(a);
        self(self, idx + 1);
        chosen.pop_back();
        --copies[key];
      }
      self(self, idx + 1);
    };
    rec(rec, 0);
  };

  // Connected vertex sets: each set is produced once, extending by one
  // neighbour at a time and banning earlier siblings.
  std::vector<VertexId> set;
  std::vector<char> in_set(n, 0), banned(n, 0);
  in_set[static_cast<std::size_t>(d.root())] = 1;
  auto grow = [&](auto&& self) -> void {
    if (!set.empty()) process(set);
    if (static_cast<int>(set.size()) == max_vertices) return;
    std::vector<VertexId> candidates;
    auto consider = [&](VertexId u) {
      if (!expandable(u)) return;
      for (ArcId a : d.out_arcs(u)) {
        VertexId h = d.head(a);
        auto uh = static_cast<std::size_t>(h);
        if (in_pool[uh] && !in_set[uh] && !banned[uh]) candidates.push_back(h);
      }
    };
    consider(d.root());
    for (VertexId u : set) consider(u);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::vector<VertexId> newly_banned;
    for (VertexId c : candidates) {
      set.push_back(c);
      in_set[static_cast<std::size_t>(c)] = 1;
      self(self);
      in_set[static_cast<std::size_t>(c)] = 0;
      set.pop_back();
      banned[static_cast<std::size_t>(c)] = 1;
      newly_banned.push_back(c);
    }
    for (VertexId c : newly_banned) banned[static_cast<std::size_t>(c)] = 0;
  };
  grow(grow);
  std::sort(out.begin(), out.end(), [](const CompactCore& x, const CompactCore& y) { return x.ids < y.ids; });
  return out;
}

inline std::vector<CompactCore> enumerate_compact_cores(const RootedDigraph& d, int k,
                                                        CoreEnumeration mode = CoreEnumeration::minimal) {
  auto view = fpt::classify_vertices_flow(d, k);
  return enumerate_compact_cores(d, k, view, fpt::candidate_pool(d, view, 2 * k - 1), mode);
}

/// Growth as for kernels, with flow targets; results must be classic cores.
inline fpt::GrowResult grow_to_classic_core(const RootedDigraph& d, int k, const CompactCore& x1,
                                            const CompactCore& x2) {
  auto out = fpt::grow_directed(d, x1, x2);
  for (const auto& x : out.structures)
    if (!is_classic_core(d, k, x)) throw InvariantViolation("grown core is not a classic core");
  return out;
}

struct FlowPair {
  std::array<ArcSelection, 2> sets;
  std::array<BranchingFlow, 2> flows;
};

/// Completes an extendable pair of arc-disjoint classic cores. Uncovered
/// vertices are attached arborescence-style; each new vertex's unit follows
/// its anchor's path from the core flow decomposition, which keeps every arc
/// within n-k. Each side is then minimized and its flow recomputed.
inline FlowPair complete_to_spanning_flow(const RootedDigraph& d, int k, const std::array<ArcSelection, 2>& cores) {
  const int n = d.num_vertices();
  auto grown = fpt::complete_directed(d, cores);
  FlowPair out;
  for (std::size_t i = 0; i < 2; ++i) {
    auto z = branching_flow_feasible(d, cores[i], Capacity::uniform(k));
    if (!z) throw ContractError("complete_to_spanning_flow: input is not a classic core");
    auto dec = decompose_flow(d, cores[i], *z);
    std::vector<std::vector<ArcId>> path(static_cast<std::size_t>(n));
    for (auto& p : dec.paths) path[static_cast<std::size_t>(p.target)] = std::move(p.arcs);
    std::map<ArcId, std::int64_t> load;
    for (auto [a, v] : z->values) load[a] += v;
    for (ArcId a : grown.added[i]) {
      auto& p = path[static_cast<std::size_t>(d.head(a))];
      p = path[static_cast<std::size_t>(d.tail(a))];
      p.push_back(a);
      for (ArcId b : p) ++load[b];
    }
    for (auto [a, v] : load)
      if (v > n - k) throw InvariantViolation("routed completion flow exceeds n-k");
    auto minimal = minimize_flow_branching(d, grown.sets[i], k);
    auto flow = balpack::detail::feasible_on(d, minimal.ids(), balpack::detail::all_vertices(d),
                                             Capacity::uniform(n - k));
    if (!flow) throw InvariantViolation("minimized flow branching lost feasibility");
    if (!is_triple_free(d, minimal)) throw InvariantViolation("minimized flow branching has a parallel triple");
    out.sets[i] = std::move(minimal);
    out.flows[i] = std::move(*flow);
  }
  return out;
}

/// Decides whether D has two arc-disjoint spanning (r,k)-flow branchings.
inline SolveReport solve_flow(const RootedDigraph& input, int k, const SolveOptions& options = {}) {
  if (k < 1) throw ContractError("k must be positive");
  fpt::Stopwatch clock;
  const ProblemInstance original{ProblemKind::flow, input, k};
  const auto capped = cap_parallel_with_ids(original);
  const RootedDigraph& d = capped.instance.digraph();
  const int non_root = d.num_vertices() - 1;

  SolveReport report;
  report.problem = ProblemKind::flow;
  report.k = k;
  auto finish = [&](SolveReport r) {
    fpt::finalize(r, original, capped.original_id);
    r.seconds = clock.seconds();
    return r;
  };

  // Exhaustive witnesses are bipartitions; trim them like completed ones.
  auto trimmed = [&](SolveReport r) {
    if (!r.witness) return r;
    auto trim = [&](std::vector<int>& ids, std::optional<BranchingFlow>& z) {
      auto minimal = minimize_flow_branching(d, ArcSelection(ids), k);
      ids = minimal.ids();
      z = balpack::detail::feasible_on(d, ids, balpack::detail::all_vertices(d), Capacity::uniform(d.num_vertices() - k));
    };
    trim(r.witness->tree1, r.witness->flow1);
    trim(r.witness->tree2, r.witness->flow2);
    return r;
  };

  if (non_root < 2 * k - 1) return finish(trimmed(fpt::oracle_stage(capped.instance, options.oracle)));

  if (auto conn = is_k_root_connected(d, 2); !conn) {
    report.decision = Decision::no;
    report.stage = "connectivity-gate";
    report.cut = conn.cut;
    return finish(report);
  }

  const auto view = fpt::classify_vertices_flow(d, k);
  const auto pool = fpt::candidate_pool(d, view, 2 * k - 1);
  const auto cores = enumerate_compact_cores(d, k, view, pool, CoreEnumeration::minimal);
  report.counters.kernels = static_cast<std::int64_t>(cores.size());

  auto search = fpt::find_first_pair(
      cores.size(), options.workers, [&](std::size_t i) { return is_root_connected(d, cores[i].ids); },
      [&](std::size_t i, std::size_t j) { return cores[i].ids.disjoint_from(cores[j].ids); });
  report.counters.pairs_tested = search.pairs_tested;
  report.stage = "enumeration";
  if (!search.pair) {
    report.decision = Decision::no;
    return finish(report);
  }

  const auto& [i, j] = *search.pair;
  auto grown = grow_to_classic_core(d, k, cores[i], cores[j]);
  report.counters.grow_steps = grown.steps;
  FlowPair pair;
  try {
    pair = complete_to_spanning_flow(d, k, grown.structures);
  } catch (const fpt::CompletionStalled&) {
    auto fallback = fpt::oracle_stage(capped.instance, options.oracle);
    if (fallback.decision != Decision::yes) throw;
    fallback.counters = report.counters;
    return finish(trimmed(fallback));
  }
  report.decision = Decision::yes;
  report.stage = "complete";
  report.witness = Witness{pair.sets[0].ids(), pair.sets[1].ids(), pair.flows[0], pair.flows[1]};
  return finish(report);
}

}  // namespace balpack
