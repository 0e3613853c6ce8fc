#pragma once

// Two arc-disjoint k-safe spanning arborescences: compact kernels, their
// growth to classic kernels, completion, and the solver driving them.

#include <array>
#include <optional>
#include <tuple>
#include <vector>

#include "balpack/connectivity.hpp"
#include "balpack/errors.hpp"
#include "balpack/fpt_common.hpp"
#include "balpack/graph.hpp"
#include "balpack/report.hpp"
#include "balpack/solve_support.hpp"

namespace balpack {

using CompactKernel = fpt::CompactStructure<ArcSelection>;

namespace detail {

inline std::vector<VertexId> parent_vertices(const RootedDigraph& d, const std::vector<ArcId>& parent_arc) {
  std::vector<VertexId> parent(parent_arc.size(), -1);
  for (std::size_t v = 0; v < parent_arc.size(); ++v)
    if (parent_arc[v] >= 0) parent[v] = d.tail(parent_arc[v]);
  return parent;
}

inline std::vector<VertexId> non_root(std::vector<VertexId> verts, VertexId root) {
  verts.erase(std::remove(verts.begin(), verts.end(), root), verts.end());
  return verts;
}

inline bool canonical_less(const RootedDigraph& d, ArcId x, ArcId y) {
  return std::tuple(d.tail(x), d.head(x), x) < std::tuple(d.tail(y), d.head(y), y);
}

}  // namespace detail

/// Attachment witness if X is a compact kernel: an r-arborescence on at most
/// 2k-2 non-root vertices whose large vertices are sinks and which becomes a
/// k-safe arborescence on 2k-2 non-root vertices once imaginary leaves are
/// hung below its large vertices.
inline std::optional<fpt::Attachment> validate_compact_kernel(const RootedDigraph& d, int k,
                                                              const fpt::LargenessView& view,
                                                              const ArcSelection& x) {
  auto parents = arborescence_parents(d, x);
  if (!parents) return std::nullopt;
  auto verts = detail::non_root(selection_vertices(d, x), d.root());
  if (static_cast<int>(verts.size()) > 2 * k - 2) return std::nullopt;
  for (ArcId a : x)
    if (d.tail(a) != d.root() && view.is_large(d.tail(a))) return std::nullopt;
  return fpt::branch_attachment(verts, detail::parent_vertices(d, *parents), d.root(), view, k);
}

inline std::optional<fpt::Attachment> validate_compact_kernel(const RootedDigraph& d, int k, const ArcSelection& x) {
  return validate_compact_kernel(d, k, fpt::classify_vertices(d, k), x);
}

/// Vertices reachable from r along paths of length at most k-1 with small
/// interior vertices.
inline std::vector<VertexId> candidate_pool(const RootedDigraph& d, int k) {
  return fpt::candidate_pool(d, fpt::classify_vertices(d, k), k - 1);
}

/// A k-safe arborescence on exactly 2k-2 non-root vertices.
inline bool is_classic_kernel(const RootedDigraph& d, int k, const ArcSelection& x) {
  auto parents = arborescence_parents(d, x);
  if (!parents || static_cast<int>(x.size()) != 2 * k - 2) return false;
  for (auto [v, size] : subtree_sizes(d, x))
    if (d.tail((*parents)[static_cast<std::size_t>(v)]) == d.root() && size > k - 1) return false;
  return true;
}

/// Every compact kernel whose vertices lie in `pool`, sorted by arc ids.
inline std::vector<CompactKernel> enumerate_compact_kernels(const RootedDigraph& d, int k,
                                                            const fpt::LargenessView& view,
                                                            const std::vector<VertexId>& pool) {
  const auto n = static_cast<std::size_t>(d.num_vertices());
  const int max_vertices = 2 * k - 2;
  const int max_branch = k - 1;
  std::vector<char> in_pool(n, 0);
  for (VertexId v : pool) in_pool[static_cast<std::size_t>(v)] = 1;
  std::vector<char> in_tree(n, 0);
  in_tree[static_cast<std::size_t>(d.root())] = 1;
  std::vector<VertexId> top(n, -1);  // child of the root heading each branch
  std::vector<int> branch_size(n, 0);
  std::vector<ArcId> chosen;
  int vertex_count = 0;
  std::vector<CompactKernel> out;

  auto expansions = [&](VertexId u) {
    std::vector<ArcId> arcs;
    if (u != d.root() && view.is_large(u)) return arcs;
    for (ArcId a : d.out_arcs(u))
      if (in_pool[static_cast<std::size_t>(d.head(a))]) arcs.push_back(a);
    return arcs;
  };
  auto merge = [&](std::vector<ArcId> frontier, const std::vector<ArcId>& extra) {
    frontier.insert(frontier.end(), extra.begin(), extra.end());
    std::sort(frontier.begin(), frontier.end(), [&](ArcId x, ArcId y) { return detail::canonical_less(d, x, y); });
    return frontier;
  };

  auto rec = [&](auto&& self, std::vector<ArcId> frontier) -> void {
    // Arcs into vertices already in the tree can never be added again.
    while (!frontier.empty() && in_tree[static_cast<std::size_t>(d.head(frontier.front()))])
      frontier.erase(frontier.begin());
    if (frontier.empty()) {
      ArcSelection x{std::vector<ArcId>(chosen)};
      if (auto att = validate_compact_kernel(d, k, view, x))
        out.push_back({x, detail::non_root(selection_vertices(d, x), d.root()), *att});
      return;
    }
    ArcId a = frontier.front();
    std::vector<ArcId> rest(frontier.begin() + 1, frontier.end());
    VertexId t = d.tail(a), h = d.head(a);
    VertexId b = t == d.root() ? h : top[static_cast<std::size_t>(t)];
    bool room = vertex_count < max_vertices &&
                (t == d.root() ? max_branch >= 1 : branch_size[static_cast<std::size_t>(b)] < max_branch);
    if (room) {
      in_tree[static_cast<std::size_t>(h)] = 1;
      top[static_cast<std::size_t>(h)] = b;
      ++branch_size[static_cast<std::size_t>(b)];
      ++vertex_count;
      chosen.push_back(a);
      self(self, merge(rest, expansions(h)));
      chosen.pop_back();
      --vertex_count;
      --branch_size[static_cast<std::size_t>(b)];
      top[static_cast<std::size_t>(h)] = -1;
      in_tree[static_cast<std::size_t>(h)] = 0;
    }
    self(self, std::move(rest));
  };
  rec(rec, merge({}, expansions(d.root())));
  std::sort(out.begin(), out.end(), [](const CompactKernel& x, const CompactKernel& y) { return x.ids < y.ids; });
  return out;
}

inline std::vector<CompactKernel> enumerate_compact_kernels(const RootedDigraph& d, int k) {
  auto view = fpt::classify_vertices(d, k);
  return enumerate_compact_kernels(d, k, view, fpt::candidate_pool(d, view, k - 1));
}

/// Hangs real out-neighbours below every large vertex until each carries its
/// attachment count; see fpt::grow_directed. The results must be classic.
inline fpt::GrowResult grow_to_classic(const RootedDigraph& d, int k, const CompactKernel& x1, const CompactKernel& x2) {
  auto out = fpt::grow_directed(d, x1, x2);
  for (const auto& x : out.structures)
    if (!is_classic_kernel(d, k, x)) throw InvariantViolation("grown kernel is not a classic kernel");
  return out;
}

/// Completes an extendable pair of arc-disjoint classic kernels to two
/// arc-disjoint k-safe spanning arborescences.
inline std::array<ArcSelection, 2> complete_to_spanning(const RootedDigraph& d, int k,
                                                        const std::array<ArcSelection, 2>& kernels) {
  auto done = fpt::complete_directed(d, kernels).sets;
  for (const auto& t : done) {
    auto parents = arborescence_parents(d, t);
    if (!parents || static_cast<int>(t.size()) != d.num_vertices() - 1)
      throw InvariantViolation("completion did not produce a spanning arborescence");
    for (auto [v, size] : subtree_sizes(d, t))
      if (d.num_vertices() - size < k) throw InvariantViolation("completed arborescence is not k-safe");
  }
  return done;
}

/// Decides whether D has two arc-disjoint k-safe spanning arborescences.
inline SolveReport solve_arb(const RootedDigraph& input, int k, const SolveOptions& options = {}) {
  if (k < 1) throw ContractError("k must be positive");
  fpt::Stopwatch clock;
  const ProblemInstance original{ProblemKind::arb, input, k};
  const auto capped = cap_parallel_with_ids(original);
  const RootedDigraph& d = capped.instance.digraph();
  const int non_root = d.num_vertices() - 1;

  SolveReport report;
  report.problem = ProblemKind::arb;
  report.k = k;
  auto finish = [&](SolveReport r) {
    fpt::finalize(r, original, capped.original_id);
    r.seconds = clock.seconds();
    return r;
  };

  if (non_root < 2 * k - 2) return finish(fpt::oracle_stage(capped.instance, options.oracle));

  if (auto conn = is_k_root_connected(d, 2); !conn) {
    report.decision = Decision::no;
    report.stage = "connectivity-gate";
    report.cut = conn.cut;
    return finish(report);
  }

  const auto view = fpt::classify_vertices(d, k);
  const auto pool = fpt::candidate_pool(d, view, k - 1);
  const auto kernels = enumerate_compact_kernels(d, k, view, pool);
  report.counters.kernels = static_cast<std::int64_t>(kernels.size());

  auto search = fpt::find_first_pair(
      kernels.size(), options.workers, [&](std::size_t i) { return is_root_connected(d, kernels[i].ids); },
      [&](std::size_t i, std::size_t j) { return kernels[i].ids.disjoint_from(kernels[j].ids); });
  report.counters.pairs_tested = search.pairs_tested;
  report.stage = "enumeration";
  if (!search.pair) {
    report.decision = Decision::no;
    return finish(report);
  }

  const auto& [i, j] = *search.pair;
  auto grown = grow_to_classic(d, k, kernels[i], kernels[j]);
  report.counters.grow_steps = grown.steps;
  std::array<ArcSelection, 2> trees;
  try {
    trees = complete_to_spanning(d, k, grown.structures);
  } catch (const fpt::CompletionStalled&) {
    auto fallback = fpt::oracle_stage(capped.instance, options.oracle);
    if (fallback.decision != Decision::yes) throw;
    fallback.counters = report.counters;
    return finish(fallback);
  }
  report.decision = Decision::yes;
  report.stage = "complete";
  report.witness = Witness{trees[0].ids(), trees[1].ids(), std::nullopt, std::nullopt};
  return finish(report);
}

}  // namespace balpack
