#pragma once

// Pieces shared by the three FPT pipelines: largeness, candidate pools,
// attachment arithmetic for kernels and certificates, the canonical pair
// search (optionally across worker threads) and greedy directed completion.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "balpack/connectivity.hpp"
#include "balpack/errors.hpp"
#include "balpack/graph.hpp"

namespace balpack::fpt {

/// Whether the root may carry imaginary leaves. The structure definitions
/// attach from non-root large vertices only; keep it that way.
inline constexpr bool kRootMayAnchor = false;

struct LargenessView {
  int k = 1;
  std::int64_t threshold = 1;
  std::vector<char> large;  // per vertex; the root is never marked

  bool is_large(VertexId v) const { return large[static_cast<std::size_t>(v)] != 0; }
  std::vector<VertexId> large_vertices() const {
    std::vector<VertexId> out;
    for (std::size_t v = 0; v < large.size(); ++v)
      if (large[v]) out.push_back(static_cast<VertexId>(v));
    return out;
  }
};

namespace detail {

template <class Degree>
LargenessView classify(int n, VertexId root, int k, std::int64_t threshold, Degree degree) {
  if (k < 1) throw ContractError("k must be positive");
  LargenessView view{k, threshold, std::vector<char>(static_cast<std::size_t>(n), 0)};
  for (VertexId v = 0; v < n; ++v)
    if (v != root || kRootMayAnchor)
      view.large[static_cast<std::size_t>(v)] = degree(v) >= threshold ? 1 : 0;
  return view;
}

}  // namespace detail

/// Large iff at least 6k-5 distinct out-neighbours.
inline LargenessView classify_vertices(const RootedDigraph& d, int k) {
  return detail::classify(d.num_vertices(), d.root(), k, 6LL * k - 5,
                          [&](VertexId v) { return static_cast<std::int64_t>(d.out_neighbors(v).size()); });
}

/// Large iff at least 20k^2+1 distinct out-neighbours.
inline LargenessView classify_vertices_flow(const RootedDigraph& d, int k) {
  return detail::classify(d.num_vertices(), d.root(), k, 20LL * k * k + 1,
                          [&](VertexId v) { return static_cast<std::int64_t>(d.out_neighbors(v).size()); });
}

/// Large iff at least 8k-7 distinct neighbours.
inline LargenessView classify_vertices_tree(const RootedGraph& g, int k) {
  return detail::classify(g.num_vertices(), g.root(), k, 8LL * k - 7,
                          [&](VertexId v) { return static_cast<std::int64_t>(g.neighbors(v).size()); });
}

namespace detail {

/// Vertices at distance <= depth from the root when only the root and small
/// vertices are expanded. Ascending, root included.
template <class Next>
std::vector<VertexId> bounded_ball(int n, VertexId root, const LargenessView& view, int depth, Next next) {
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  dist[static_cast<std::size_t>(root)] = 0;
  std::vector<VertexId> queue{root};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    VertexId u = queue[qi];
    if (dist[static_cast<std::size_t>(u)] >= depth) continue;
    if (u != root && view.is_large(u)) continue;
    next(u, [&](VertexId w) {
      if (dist[static_cast<std::size_t>(w)] >= 0) return;
      dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
      queue.push_back(w);
    });
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

}  // namespace detail

inline std::vector<VertexId> candidate_pool(const RootedDigraph& d, const LargenessView& view, int depth) {
  return detail::bounded_ball(d.num_vertices(), d.root(), view, depth, [&](VertexId u, auto&& visit) {
    for (ArcId a : d.out_arcs(u)) visit(d.head(a));
  });
}

inline std::vector<VertexId> candidate_pool(const RootedGraph& g, const LargenessView& view, int depth) {
  return detail::bounded_ball(g.num_vertices(), g.root(), view, depth, [&](VertexId u, auto&& visit) {
    for (EdgeId e : g.incident(u)) visit(g.other(e, u));
  });
}

/// Imaginary leaves per large vertex of a compact structure, ascending by
/// vertex. Zero entries are kept so every large vertex has a target.
struct Attachment {
  std::vector<std::pair<VertexId, int>> leaves;

  int total() const {
    int t = 0;
    for (auto [v, x] : leaves) t += x;
    return t;
  }
  int of(VertexId v) const {
    for (auto [w, x] : leaves)
      if (w == v) return x;
    return 0;
  }
  friend bool operator==(const Attachment&, const Attachment&) = default;
};

/// Compact kernel, core or certificate with its attachment witness.
template <class Selection>
struct CompactStructure {
  Selection ids;
  std::vector<VertexId> vertices;  // non-root, ascending
  Attachment attachment;
};

/// Lexicographically smallest attachment when every branch (child of the
/// root) may hold at most `cap` vertices in total and `missing` leaves must
/// be placed below large vertices. `branch_of` maps each vertex of the
/// structure to its branch; `branch_size` is indexed by branch id.
inline std::optional<Attachment> slack_attachment(const std::vector<VertexId>& large_in_structure,
                                                  const std::vector<int>& branch_of_large,
                                                  std::vector<int> branch_room, int missing) {
  Attachment out;
  for (std::size_t i = 0; i < large_in_structure.size(); ++i) {
    int b = branch_of_large[i];
    // Room reachable by later large vertices, split by whether they share b.
    bool later_same = false;
    int later_other = 0;
    std::vector<char> counted(branch_room.size(), 0);
    for (std::size_t j = i + 1; j < large_in_structure.size(); ++j) {
      int c = branch_of_large[j];
      if (c == b) {
        later_same = true;
      } else if (!counted[static_cast<std::size_t>(c)]) {
        counted[static_cast<std::size_t>(c)] = 1;
        later_other += branch_room[static_cast<std::size_t>(c)];
      }
    }
    int x = later_same ? std::max(0, missing - later_other - branch_room[static_cast<std::size_t>(b)])
                       : std::max(0, missing - later_other);
    x = std::min(x, branch_room[static_cast<std::size_t>(b)]);
    branch_room[static_cast<std::size_t>(b)] -= x;
    missing -= x;
    out.leaves.emplace_back(large_in_structure[i], x);
  }
  if (missing != 0) return std::nullopt;
  return out;
}

/// Branch arithmetic shared by kernels and certificates: `parent` gives the
/// parent vertex of every structure vertex (root for children of the root).
inline std::optional<Attachment> branch_attachment(const std::vector<VertexId>& vertices,
                                                   const std::vector<VertexId>& parent, VertexId root,
                                                   const LargenessView& view, int k) {
  const int cap = k - 1;
  const int missing = 2 * k - 2 - static_cast<int>(vertices.size());
  if (missing < 0) return std::nullopt;
  std::vector<VertexId> tops;
  auto branch_id = [&](VertexId v) {
    VertexId top = v;
    while (parent[static_cast<std::size_t>(top)] != root) top = parent[static_cast<std::size_t>(top)];
    auto it = std::find(tops.begin(), tops.end(), top);
    if (it == tops.end()) {
      tops.push_back(top);
      return static_cast<int>(tops.size()) - 1;
    }
    return static_cast<int>(it - tops.begin());
  };
  std::vector<int> size;
  std::vector<VertexId> large;
  std::vector<int> large_branch;
  for (VertexId v : vertices) {
    int b = branch_id(v);
    if (static_cast<int>(size.size()) <= b) size.resize(static_cast<std::size_t>(b) + 1, 0);
    ++size[static_cast<std::size_t>(b)];
    if (view.is_large(v)) {
      large.push_back(v);
      large_branch.push_back(b);
    }
  }
  std::vector<int> room(size.size());
  for (std::size_t b = 0; b < size.size(); ++b) {
    if (size[b] > cap) return std::nullopt;
    room[b] = cap - size[b];
  }
  return slack_attachment(large, large_branch, std::move(room), missing);
}

// ---------------------------------------------------------------------------
// Pair search

struct PairSearchResult {
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  std::int64_t pairs_tested = 0;
};

/// Position-based count: pairs (i', j') with i' <= j' preceding and including
/// (i, j) in lexicographic order over `count` structures.
inline std::int64_t pairs_up_to(std::size_t count, std::size_t i, std::size_t j) {
  const auto n = static_cast<std::int64_t>(count);
  const auto ii = static_cast<std::int64_t>(i);
  std::int64_t before = ii * n - ii * (ii - 1) / 2;
  return before + static_cast<std::int64_t>(j - i) + 1;
}

/// Smallest (i, j), i <= j, in lexicographic order with usable(i),
/// usable(j) and pair_ok(i, j). `usable` is memoised; both callbacks may run
/// concurrently when workers > 1, and the answer does not depend on it.
template <class Usable, class PairOk>
PairSearchResult find_first_pair(std::size_t count, int workers, Usable usable, PairOk pair_ok) {
  std::vector<std::atomic<signed char>> memo(count);
  for (auto& m : memo) m.store(-1, std::memory_order_relaxed);
  auto ok = [&](std::size_t i) {
    signed char s = memo[i].load(std::memory_order_acquire);
    if (s < 0) {
      s = usable(i) ? 1 : 0;
      memo[i].store(s, std::memory_order_release);
    }
    return s == 1;
  };

  std::atomic<std::size_t> best_i{count};
  const int w = std::max(1, workers);
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> found(static_cast<std::size_t>(w));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(w));
  auto run = [&](int id) {
    try {
      for (std::size_t i = static_cast<std::size_t>(id); i < count; i += static_cast<std::size_t>(w)) {
        if (i >= best_i.load()) return;
        if (!ok(i)) continue;
        for (std::size_t j = i; j < count; ++j) {
          if (i >= best_i.load()) return;
          if (!ok(j) || !pair_ok(i, j)) continue;
          found[static_cast<std::size_t>(id)] = std::pair{i, j};
          std::size_t cur = best_i.load();
          while (i < cur && !best_i.compare_exchange_weak(cur, i)) {
          }
          return;
        }
      }
    } catch (...) {
      errors[static_cast<std::size_t>(id)] = std::current_exception();
      best_i.store(0);
    }
  };
  if (w == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < w; ++id) pool.emplace_back(run, id);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  PairSearchResult result;
  for (const auto& f : found)
    if (f && (!result.pair || f->first < result.pair->first)) result.pair = f;
  result.pairs_tested = result.pair ? pairs_up_to(count, result.pair->first, result.pair->second)
                                    : static_cast<std::int64_t>(count) * static_cast<std::int64_t>(count + 1) / 2;
  return result;
}

// ---------------------------------------------------------------------------
// Directed growth

struct GrowResult {
  std::array<ArcSelection, 2> structures;
  std::int64_t steps = 0;
};

/// Grows a compact pair towards classic structures, first structure first.
/// For every large vertex v with x_v pending leaves, adds the first arc v->z
/// in (head, id) order whose head is new to the structure, which the other
/// structure does not use, and whose removal keeps D minus the structure
/// root-connected. Parallel copies of a rejected arc are skipped; a rejected
/// arc stays rejected because the structure only grows.
inline GrowResult grow_directed(const RootedDigraph& d, const CompactStructure<ArcSelection>& x1,
                                const CompactStructure<ArcSelection>& x2) {
  GrowResult out{{x1.ids, x2.ids}, 0};
  const auto m = static_cast<std::size_t>(d.num_arcs());
  const std::array<const CompactStructure<ArcSelection>*, 2> src{&x1, &x2};
  for (std::size_t i = 0; i < 2; ++i) {
    ArcSelection& cur = out.structures[i];
    const ArcSelection& other = out.structures[1 - i];
    auto blocked = cur.mask(m);
    auto reach = balpack::detail::reach_from_root(d, blocked);
    if (!reach.all()) throw ContractError("growth needs an extendable pair");
    std::vector<char> in_structure(static_cast<std::size_t>(d.num_vertices()), 0);
    for (VertexId v : selection_vertices(d, cur)) in_structure[static_cast<std::size_t>(v)] = 1;
    for (auto [v, target] : src[i]->attachment.leaves) {
      if (target == 0) continue;
      std::vector<ArcId> arcs(d.out_arcs(v).begin(), d.out_arcs(v).end());
      std::sort(arcs.begin(), arcs.end(),
                [&](ArcId x, ArcId y) { return std::pair(d.head(x), x) < std::pair(d.head(y), y); });
      int added = 0;
      VertexId failed_head = -1;
      for (ArcId a : arcs) {
        if (added == target) break;
        VertexId z = d.head(a);
        if (in_structure[static_cast<std::size_t>(z)] || other.contains(a) || z == failed_head) continue;
        if (!balpack::detail::stays_root_connected(d, blocked, reach, a)) {
          failed_head = z;
          continue;
        }
        bool tree_arc = reach.parent_arc[static_cast<std::size_t>(z)] == a;
        blocked[static_cast<std::size_t>(a)] = 1;
        in_structure[static_cast<std::size_t>(z)] = 1;
        cur.insert(a);
        ++added;
        ++out.steps;
        if (tree_arc) reach = balpack::detail::reach_from_root(d, blocked);
      }
      if (added < target) throw InvariantViolation("growth stalled at a large vertex");
    }
  }
  if (!out.structures[0].disjoint_from(out.structures[1])) throw InvariantViolation("grown structures share an arc");
  return out;
}

// ---------------------------------------------------------------------------
// Directed completion

/// Greedy completion could not cover every vertex.
class CompletionStalled : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

struct DirectedCompletion {
  std::array<ArcSelection, 2> sets;
  std::array<std::vector<ArcId>, 2> added;  // in insertion order
};

/// Extends two arc-disjoint root-connected seeds (an extendable pair in a
/// 2-root-connected digraph) to arc-disjoint spanning sub-digraphs by
/// arborescence growth. Seed 0 grows first, taking the first canonical arc
/// that leaves its covered set, avoids seed 1 and keeps D minus it
/// root-connected; seed 1 then grows inside the remaining arcs.
inline DirectedCompletion complete_directed(const RootedDigraph& d, const std::array<ArcSelection, 2>& seeds) {
  const auto n = static_cast<std::size_t>(d.num_vertices());
  const auto m = static_cast<std::size_t>(d.num_arcs());
  const auto order = d.canonical_order();
  DirectedCompletion out{seeds, {}};

  auto covered_by = [&](const ArcSelection& s) {
    std::vector<char> cov(n, 0);
    cov[static_cast<std::size_t>(d.root())] = 1;
    for (ArcId a : s) cov[static_cast<std::size_t>(d.head(a))] = 1;
    return cov;
  };

  // Phase 1: keep D - T0 root-connected.
  {
    auto cov = covered_by(seeds[0]);
    std::size_t count = static_cast<std::size_t>(std::count(cov.begin(), cov.end(), 1));
    auto blocked = seeds[0].mask(m);
    auto other = seeds[1].mask(m);
    std::vector<char> critical(m, 0);  // stays critical as T0 grows
    auto reach = balpack::detail::reach_from_root(d, blocked);
    if (!reach.all()) throw ContractError("seed pair is not extendable");
    while (count < n) {
      bool grew = false;
      for (ArcId a : order) {
        auto ua = static_cast<std::size_t>(a);
        if (other[ua] || blocked[ua] || critical[ua]) continue;
        if (!cov[static_cast<std::size_t>(d.tail(a))] || cov[static_cast<std::size_t>(d.head(a))]) continue;
        if (!balpack::detail::stays_root_connected(d, blocked, reach, a)) {
          critical[ua] = 1;
          continue;
        }
        bool tree_arc = reach.parent_arc[static_cast<std::size_t>(d.head(a))] == a;
        blocked[ua] = 1;
        cov[static_cast<std::size_t>(d.head(a))] = 1;
        ++count;
        out.sets[0].insert(a);
        out.added[0].push_back(a);
        if (tree_arc) reach = balpack::detail::reach_from_root(d, blocked);
        grew = true;
        break;
      }
      if (!grew) throw CompletionStalled("greedy completion of the first structure stalled");
    }
  }
  // Phase 2: any arc outside T0.
  {
    auto cov = covered_by(seeds[1]);
    std::size_t count = static_cast<std::size_t>(std::count(cov.begin(), cov.end(), 1));
    auto taken = out.sets[0].mask(m);
    while (count < n) {
      bool grew = false;
      for (ArcId a : order) {
        if (taken[static_cast<std::size_t>(a)]) continue;
        if (!cov[static_cast<std::size_t>(d.tail(a))] || cov[static_cast<std::size_t>(d.head(a))]) continue;
        cov[static_cast<std::size_t>(d.head(a))] = 1;
        ++count;
        out.sets[1].insert(a);
        out.added[1].push_back(a);
        grew = true;
        break;
      }
      if (!grew) throw CompletionStalled("completion of the second structure stalled");
    }
  }
  return out;
}

}  // namespace balpack::fpt
