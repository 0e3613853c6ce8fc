#pragma once

// Two edge-disjoint (r,k)-safe spanning trees: compact certificates, growth
// to classic certificates under the completability oracle, and completion by
// matroid union.

#include <array>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "balpack/errors.hpp"
#include "balpack/fpt_common.hpp"
#include "balpack/graph.hpp"
#include "balpack/matroid.hpp"
#include "balpack/report.hpp"
#include "balpack/solve_support.hpp"

namespace balpack {

using CompactCertificate = fpt::CompactStructure<EdgeSelection>;
using BasePair = std::pair<EdgeSelection, EdgeSelection>;

/// Attachment witness if X is a compact certificate: a tree through r on at
/// most 2k-2 other vertices whose large vertices are leaves, extendable to an
/// (r,k)-safe tree on 2k-1 vertices by hanging imaginary leaves below them.
inline std::optional<fpt::Attachment> validate_compact_certificate(const RootedGraph& g, int k,
                                                                   const fpt::LargenessView& view,
                                                                   const EdgeSelection& x) {
  auto parents = tree_parents(g, x);
  if (!parents) return std::nullopt;
  std::vector<VertexId> verts;
  for (VertexId v : selection_vertices(g, x))
    if (v != g.root()) verts.push_back(v);
  if (static_cast<int>(verts.size()) > 2 * k - 2) return std::nullopt;
  std::vector<int> degree(static_cast<std::size_t>(g.num_vertices()), 0);
  for (EdgeId e : x) {
    ++degree[static_cast<std::size_t>(g.edge(e).u)];
    ++degree[static_cast<std::size_t>(g.edge(e).v)];
  }
  for (VertexId v : verts)
    if (view.is_large(v) && degree[static_cast<std::size_t>(v)] != 1) return std::nullopt;
  return fpt::branch_attachment(verts, *parents, g.root(), view, k);
}

inline std::optional<fpt::Attachment> validate_compact_certificate(const RootedGraph& g, int k,
                                                                   const EdgeSelection& x) {
  return validate_compact_certificate(g, k, fpt::classify_vertices_tree(g, k), x);
}

inline std::vector<VertexId> candidate_pool_tree(const RootedGraph& g, int k) {
  return fpt::candidate_pool(g, fpt::classify_vertices_tree(g, k), k - 1);
}

/// A tree through r on exactly 2k-2 other vertices, every branch at most k-1.
inline bool is_classic_certificate(const RootedGraph& g, int k, const EdgeSelection& x) {
  auto parents = tree_parents(g, x);
  if (!parents || static_cast<int>(x.size()) != 2 * k - 2) return false;
  for (auto [v, below] : hanging_component_sizes(g, x))
    if ((*parents)[static_cast<std::size_t>(v)] == g.root() && below + 1 > k - 1) return false;
  return true;
}

/// Every compact certificate whose vertices lie in `pool`, sorted by edge ids.
inline std::vector<CompactCertificate> enumerate_compact_certificates(const RootedGraph& g, int k,
                                                                      const fpt::LargenessView& view,
                                                                      const std::vector<VertexId>& pool) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  const int max_vertices = 2 * k - 2;
  const int max_branch = k - 1;
  std::vector<char> in_pool(n, 0);
  for (VertexId v : pool) in_pool[static_cast<std::size_t>(v)] = 1;
  std::vector<char> in_tree(n, 0);
  in_tree[static_cast<std::size_t>(g.root())] = 1;
  std::vector<VertexId> top(n, -1);
  std::vector<int> branch_size(n, 0);
  std::vector<EdgeId> chosen;
  int vertex_count = 0;
  std::vector<CompactCertificate> out;

  // Frontier entries are (tree endpoint, edge); the far endpoint is the other one.
  using Entry = std::pair<VertexId, EdgeId>;
  auto far = [&](const Entry& e) { return g.other(e.second, e.first); };
  auto less = [&](const Entry& a, const Entry& b) {
    return std::tuple(a.first, far(a), a.second) < std::tuple(b.first, far(b), b.second);
  };
  auto expansions = [&](VertexId u) {
    std::vector<Entry> edges;
    if (u != g.root() && view.is_large(u)) return edges;
    for (EdgeId e : g.incident(u)) {
      VertexId w = g.other(e, u);
      if (w != u && in_pool[static_cast<std::size_t>(w)]) edges.emplace_back(u, e);
    }
    return edges;
  };
  auto merge = [&](std::vector<Entry> frontier, const std::vector<Entry>& extra) {
    frontier.insert(frontier.end(), extra.begin(), extra.end());
    std::sort(frontier.begin(), frontier.end(), less);
    return frontier;
  };

  auto rec = [&](auto&& self, std::vector<Entry> frontier) -> void {
    while (!frontier.empty() && in_tree[static_cast<std::size_t>(far(frontier.front()))])
      frontier.erase(frontier.begin());
    if (frontier.empty()) {
      EdgeSelection x{std::vector<EdgeId>(chosen)};
      if (auto att = validate_compact_certificate(g, k, view, x)) {
        std::vector<VertexId> verts;
        for (VertexId v : selection_vertices(g, x))
          if (v != g.root()) verts.push_back(v);
        out.push_back({x, std::move(verts), *att});
      }
      return;
    }
    Entry head = frontier.front();
    std::vector<Entry> rest(frontier.begin() + 1, frontier.end());
    VertexId t = head.first, h = far(head);
    VertexId b = t == g.root() ? h : top[static_cast<std::size_t>(t)];
    bool room = vertex_count < max_vertices &&
                (t == g.root() ? max_branch >= 1 : branch_size[static_cast<std::size_t>(b)] < max_branch);
    if (room) {
      in_tree[static_cast<std::size_t>(h)] = 1;
      top[static_cast<std::size_t>(h)] = b;
      ++branch_size[static_cast<std::size_t>(b)];
      ++vertex_count;
      chosen.push_back(head.second);
      self(self, merge(rest, expansions(h)));
      chosen.pop_back();
      --vertex_count;
      --branch_size[static_cast<std::size_t>(b)];
      top[static_cast<std::size_t>(h)] = -1;
      in_tree[static_cast<std::size_t>(h)] = 0;
    }
    self(self, std::move(rest));
  };
  rec(rec, merge({}, expansions(g.root())));
  std::sort(out.begin(), out.end(),
            [](const CompactCertificate& x, const CompactCertificate& y) { return x.ids < y.ids; });
  return out;
}

inline std::vector<CompactCertificate> enumerate_compact_certificates(const RootedGraph& g, int k) {
  auto view = fpt::classify_vertices_tree(g, k);
  return enumerate_compact_certificates(g, k, view, fpt::candidate_pool(g, view, k - 1));
}

struct TreeGrowResult {
  std::array<EdgeSelection, 2> structures;
  BasePair bases;  // a completion of the grown pair
  std::int64_t steps = 0;
};

/// Grows a completable pair of compact certificates to classic ones, first
/// certificate first. Each large vertex v takes the first edges v-z in
/// (z, id) order with z new, the edge unused by the other certificate, and
/// the pair still completable. A neighbour that fails once fails for good.
inline TreeGrowResult grow_to_classic_certificate(const RootedGraph& g, int k, const CompactCertificate& x1,
                                                  const CompactCertificate& x2,
                                                  std::optional<BasePair> hint = std::nullopt) {
  TreeGrowResult out{{x1.ids, x2.ids}, {}, 0};
  auto bases = find_disjoint_bases(g, x1.ids, x2.ids, hint);
  if (!bases) throw ContractError("growth needs a completable pair");
  const std::array<const CompactCertificate*, 2> src{&x1, &x2};
  for (std::size_t i = 0; i < 2; ++i) {
    EdgeSelection& cur = out.structures[i];
    const EdgeSelection& other = out.structures[1 - i];
    std::vector<char> in_structure(static_cast<std::size_t>(g.num_vertices()), 0);
    for (VertexId v : selection_vertices(g, cur)) in_structure[static_cast<std::size_t>(v)] = 1;
    in_structure[static_cast<std::size_t>(g.root())] = 1;
    for (auto [v, target] : src[i]->attachment.leaves) {
      if (target == 0) continue;
      std::vector<EdgeId> edges(g.incident(v).begin(), g.incident(v).end());
      std::sort(edges.begin(), edges.end(), [&](EdgeId a, EdgeId b) {
        return std::pair(g.other(a, v), a) < std::pair(g.other(b, v), b);
      });
      int added = 0;
      VertexId failed = -1;
      for (EdgeId e : edges) {
        if (added == target) break;
        VertexId z = g.other(e, v);
        if (in_structure[static_cast<std::size_t>(z)] || other.contains(e) || z == failed) continue;
        EdgeSelection next = cur;
        next.insert(e);
        // The current completion already certifies the step when it uses e for this side.
        bool kept = i == 0 ? bases->first.contains(e) : bases->second.contains(e);
        if (!kept) {
          auto trial = i == 0 ? find_disjoint_bases(g, next, other, bases) : find_disjoint_bases(g, other, next, bases);
          if (!trial) {
            failed = z;
            continue;
          }
          bases = std::move(trial);
        }
        cur = std::move(next);
        in_structure[static_cast<std::size_t>(z)] = 1;
        ++added;
        ++out.steps;
      }
      if (added < target) throw InvariantViolation("certificate growth stalled at a large vertex");
    }
  }
  for (const auto& x : out.structures)
    if (!is_classic_certificate(g, k, x)) throw InvariantViolation("grown certificate is not classic");
  out.bases = std::move(*bases);
  return out;
}

inline bool is_safe_spanning_tree(const RootedGraph& g, int k, const EdgeSelection& t) {
  if (static_cast<int>(t.size()) != g.num_vertices() - 1 || !is_rooted_tree(g, t)) return false;
  for (auto [v, below] : hanging_component_sizes(g, t))
    if ((g.num_vertices() - 1) - below < k) return false;
  return true;
}

/// Two edge-disjoint spanning trees extending a completable pair of classic
/// certificates. Both are (r,k)-safe.
inline std::array<EdgeSelection, 2> complete_to_spanning_trees(const RootedGraph& g, int k,
                                                               const std::array<EdgeSelection, 2>& certs,
                                                               std::optional<BasePair> hint = std::nullopt) {
  auto bases = find_disjoint_bases(g, certs[0], certs[1], hint);
  if (!bases) throw InvariantViolation("classic certificates are not completable");
  std::array<EdgeSelection, 2> done{bases->first, bases->second};
  for (const auto& t : done)
    if (!is_safe_spanning_tree(g, k, t)) throw InvariantViolation("completed tree is not (r,k)-safe");
  return done;
}

/// Decides whether G has two edge-disjoint (r,k)-safe spanning trees.
inline SolveReport solve_tree(const RootedGraph& input, int k, const SolveOptions& options = {}) {
  if (k < 1) throw ContractError("k must be positive");
  fpt::Stopwatch clock;
  const ProblemInstance original{ProblemKind::tree, input, k};
  const auto capped = cap_parallel_with_ids(original);
  const RootedGraph& g = capped.instance.undirected();
  const int non_root = g.num_vertices() - 1;

  SolveReport report;
  report.problem = ProblemKind::tree;
  report.k = k;
  auto finish = [&](SolveReport r) {
    fpt::finalize(r, original, capped.original_id);
    r.seconds = clock.seconds();
    return r;
  };

  if (non_root < 2 * k - 2) return finish(fpt::oracle_stage(capped.instance, options.oracle));

  auto gate = find_disjoint_bases(g, {}, {});
  if (!gate) {
    report.decision = Decision::no;
    report.stage = "tutte-gate";
    return finish(report);
  }

  const auto view = fpt::classify_vertices_tree(g, k);
  const auto pool = fpt::candidate_pool(g, view, k - 1);
  const auto certs = enumerate_compact_certificates(g, k, view, pool);
  report.counters.kernels = static_cast<std::int64_t>(certs.size());

  auto search = fpt::find_first_pair(
      certs.size(), options.workers,
      [&](std::size_t i) { return find_disjoint_bases(g, certs[i].ids, {}, gate).has_value(); },
      [&](std::size_t i, std::size_t j) {
        return certs[i].ids.disjoint_from(certs[j].ids) &&
               find_disjoint_bases(g, certs[i].ids, certs[j].ids, gate).has_value();
      });
  report.counters.pairs_tested = search.pairs_tested;
  report.stage = "enumeration";
  if (!search.pair) {
    report.decision = Decision::no;
    return finish(report);
  }

  const auto& [i, j] = *search.pair;
  auto grown = grow_to_classic_certificate(g, k, certs[i], certs[j], gate);
  report.counters.grow_steps = grown.steps;
  auto trees = complete_to_spanning_trees(g, k, grown.structures, grown.bases);
  report.decision = Decision::yes;
  report.stage = "complete";
  report.witness = Witness{trees[0].ids(), trees[1].ids(), std::nullopt, std::nullopt};
  return finish(report);
}

}  // namespace balpack
