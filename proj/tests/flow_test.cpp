#include <gtest/gtest.h>

#include "balpack/flow.hpp"
#include "support.hpp"

using namespace balpack;
using namespace testing_support;

namespace {

// Exhaustive reference: try every integral assignment with values in [0, cap].
bool brute_feasible(const RootedDigraph& d, const ArcSelection& sel, std::int64_t cap) {
  auto verts = selection_vertices(d, sel);
  std::vector<ArcId> arcs = sel.ids();
  std::vector<std::int64_t> z(arcs.size(), 0);
  std::int64_t top = std::min<std::int64_t>(cap, static_cast<std::int64_t>(verts.size()));
  if (top < 0) top = 0;
  while (true) {
    std::vector<std::int64_t> net(static_cast<std::size_t>(d.num_vertices()), 0);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      net[static_cast<std::size_t>(d.head(arcs[i]))] += z[i];
      net[static_cast<std::size_t>(d.tail(arcs[i]))] -= z[i];
    }
    bool ok = true;
    for (VertexId v : verts)
      if (v != d.root() && net[static_cast<std::size_t>(v)] != 1) ok = false;
    if (ok) return true;
    std::size_t i = 0;
    while (i < z.size() && z[i] == top) z[i++] = 0;
    if (i == z.size()) return false;
    ++z[i];
  }
}

void expect_recomposes(const RootedDigraph& d, const ArcSelection& sel, const BranchingFlow& z) {
  auto dec = decompose_flow(d, sel, z);
  std::vector<std::int64_t> sum(static_cast<std::size_t>(d.num_arcs()), 0);
  auto verts = selection_vertices(d, sel);
  ASSERT_EQ(dec.paths.size(), verts.size() - 1);
  for (const auto& p : dec.paths) {
    VertexId at = d.root();
    for (ArcId a : p.arcs) {
      EXPECT_EQ(d.tail(a), at);
      at = d.head(a);
      ++sum[static_cast<std::size_t>(a)];
    }
    EXPECT_EQ(at, p.target);
  }
  for (const auto& c : dec.cycles) {
    ASSERT_FALSE(c.arcs.empty());
    for (std::size_t i = 0; i < c.arcs.size(); ++i) {
      EXPECT_EQ(d.head(c.arcs[i]), d.tail(c.arcs[(i + 1) % c.arcs.size()]));
      ++sum[static_cast<std::size_t>(c.arcs[i])];
    }
  }
  for (ArcId a = 0; a < d.num_arcs(); ++a) EXPECT_EQ(sum[static_cast<std::size_t>(a)], z.value(a));
}

}  // namespace

TEST(BranchingFlow, PathExamples) {
  RootedDigraph path(3, 0, {{0, 1}, {1, 2}});
  auto z = branching_flow_feasible(path, Capacity::uniform(2));
  ASSERT_TRUE(z);
  EXPECT_EQ(z->value(0), 2);
  EXPECT_EQ(z->value(1), 1);
  EXPECT_FALSE(branching_flow_feasible(path, Capacity::uniform(1)));
}

TEST(BranchingFlow, Star) {
  RootedDigraph star(4, 0, {{0, 1}, {0, 2}, {0, 3}});
  auto z = branching_flow_feasible(star, Capacity::uniform(1));
  ASSERT_TRUE(z);
  for (ArcId a = 0; a < 3; ++a) EXPECT_EQ(z->value(a), 1);
}

TEST(BranchingFlow, PerArcCapacities) {
  RootedDigraph path(3, 0, {{0, 1}, {1, 2}});
  EXPECT_TRUE(branching_flow_feasible(path, Capacity::per_arc({2, 1})));
  EXPECT_FALSE(branching_flow_feasible(path, Capacity::per_arc({2, 0})));
}

TEST(SpanningFlowBranching, Examples) {
  RootedDigraph d(4, 0, {{0, 1}, {0, 2}, {2, 3}, {1, 3}});
  // {r->a, r->b, b->c} is 2-safe (n=4): branches 1 and 2, 4-2 = 2.
  EXPECT_TRUE(is_spanning_rk_flow_branching(d, {0, 1, 2}, 2));
  EXPECT_FALSE(is_spanning_rk_flow_branching(d, {0, 1}, 1));
  EXPECT_FALSE(is_spanning_rk_flow_branching(d, {0, 1, 2}, 3));
}

TEST(SpanningFlowBranching, KOneIsReachability) {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 1 + static_cast<int>(rng() % 5);
    auto d = random_digraph(rng, n, static_cast<int>(rng() % 10));
    EXPECT_EQ(is_spanning_rk_flow_branching(d, d.all_arcs(), 1), is_root_connected(d));
  }
}

TEST(SpanningFlowBranching, SafeArborescencesQualify) {
  std::mt19937_64 rng(29);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 2 + static_cast<int>(rng() % 7);
    std::vector<Arc> arcs;
    for (int v = 1; v < n; ++v) arcs.push_back({static_cast<int>(rng() % v), v});
    RootedDigraph d(n, 0, arcs);
    auto sizes = subtree_sizes(d, d.all_arcs());
    int worst = 0;
    for (auto [v, s] : sizes) worst = std::max(worst, s);
    int k = n - worst;  // the largest k for which this arborescence is k-safe
    EXPECT_TRUE(is_spanning_rk_flow_branching(d, d.all_arcs(), k));
  }
}

TEST(BranchingFlow, AgreesWithAssignmentEnumeration) {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 2 + static_cast<int>(rng() % 3);
    auto d = random_digraph(rng, n, 1 + static_cast<int>(rng() % 5));
    for (std::int64_t cap = 0; cap <= 3; ++cap)
      EXPECT_EQ(branching_flow_feasible(d, d.all_arcs(), Capacity::uniform(cap)).has_value(),
                brute_feasible(d, d.all_arcs(), cap));
  }
}

TEST(BranchingFlow, MonotoneInArcs) {
  std::mt19937_64 rng(37);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 2 + static_cast<int>(rng() % 5);
    auto d = random_digraph(rng, n, 2 + static_cast<int>(rng() % 12));
    std::vector<int> part;
    for (int a = 0; a < d.num_arcs(); ++a)
      if (rng() % 2) part.push_back(a);
    ArcSelection sub(part);
    auto subverts = selection_vertices(d, sub);
    // Same vertex set is needed for a fair comparison: add arcs only inside it.
    std::vector<int> more = part;
    for (int a = 0; a < d.num_arcs(); ++a)
      if (std::binary_search(subverts.begin(), subverts.end(), d.tail(a)) &&
          std::binary_search(subverts.begin(), subverts.end(), d.head(a)))
        more.push_back(a);
    for (std::int64_t cap = 1; cap <= 3; ++cap)
      if (branching_flow_feasible(d, sub, Capacity::uniform(cap))) {
        EXPECT_TRUE(branching_flow_feasible(d, ArcSelection(more), Capacity::uniform(cap)));
      }
  }
}

TEST(Decompose, PathFlow) {
  RootedDigraph path(3, 0, {{0, 1}, {1, 2}});
  BranchingFlow z{{{0, 2}, {1, 1}}};
  auto dec = decompose_flow(path, {0, 1}, z);
  ASSERT_EQ(dec.paths.size(), 2u);
  EXPECT_EQ(dec.paths[0].target, 1);
  EXPECT_EQ(dec.paths[0].arcs, (std::vector<ArcId>{0}));
  EXPECT_EQ(dec.paths[1].arcs, (std::vector<ArcId>{0, 1}));
  EXPECT_TRUE(dec.cycles.empty());
}

TEST(Decompose, ExtraCycle) {
  RootedDigraph d(3, 0, {{0, 1}, {1, 2}, {2, 1}});
  BranchingFlow z{{{0, 2}, {1, 2}, {2, 1}}};
  auto dec = decompose_flow(d, {0, 1, 2}, z);
  ASSERT_EQ(dec.paths.size(), 2u);
  EXPECT_EQ(dec.paths[1].arcs, (std::vector<ArcId>{0, 1}));
  ASSERT_EQ(dec.cycles.size(), 1u);
  EXPECT_EQ(dec.cycles[0].arcs.size(), 2u);
  expect_recomposes(d, {0, 1, 2}, z);
}

TEST(Decompose, StarAndInvalid) {
  RootedDigraph star(4, 0, {{0, 1}, {0, 2}, {0, 3}});
  BranchingFlow z{{{0, 1}, {1, 1}, {2, 1}}};
  auto dec = decompose_flow(star, {0, 1, 2}, z);
  ASSERT_EQ(dec.paths.size(), 3u);
  for (const auto& p : dec.paths) EXPECT_EQ(p.arcs.size(), 1u);
  BranchingFlow bad{{{0, 2}, {1, 1}, {2, 1}}};
  EXPECT_THROW(decompose_flow(star, {0, 1, 2}, bad), ContractError);
}

TEST(Decompose, RandomRecomposition) {
  std::mt19937_64 rng(41);
  int done = 0;
  for (int iter = 0; done < 200 && iter < 10000; ++iter) {
    int n = 2 + static_cast<int>(rng() % 6);
    auto d = random_digraph(rng, n, n + static_cast<int>(rng() % 14));
    auto z = branching_flow_feasible(d, Capacity::uniform(1 + static_cast<std::int64_t>(rng() % n)));
    if (!z) continue;
    // Push extra circulation around any 2-cycle so cycles appear too.
    for (ArcId a = 0; a < d.num_arcs(); ++a)
      for (ArcId b = 0; b < d.num_arcs(); ++b)
        if (d.tail(a) == d.head(b) && d.head(a) == d.tail(b) && rng() % 2) {
          for (auto& [id, v] : z->values)
            if (id == a || id == b) ++v;
          a = b = d.num_arcs();
        }
    ++done;
    expect_recomposes(d, d.all_arcs(), *z);
  }
  EXPECT_GE(done, 200);
}

TEST(Minimize, DropsParallelCopiesAndRedundantArcs) {
  // r has three copies to a; a->b; n = 3, k = 1, |V| = 2 >= 2k-1.
  RootedDigraph d(3, 0, {{0, 1}, {0, 1}, {0, 1}, {1, 2}, {0, 2}});
  auto m = minimize_flow_branching(d, d.all_arcs(), 1);
  EXPECT_TRUE(is_triple_free(d, m));
  EXPECT_TRUE(is_spanning_rk_flow_branching(d, m, 1));
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(minimize_flow_branching(d, m, 1), m);
  EXPECT_THROW(minimize_flow_branching(d, {3}, 1), ContractError);
}

TEST(Minimize, TripleFreeProperty) {
  std::mt19937_64 rng(43);
  int done = 0;
  for (int iter = 0; done < 200 && iter < 20000; ++iter) {
    int n = 2 + static_cast<int>(rng() % 6);
    auto d = random_digraph(rng, n, n + static_cast<int>(rng() % 16));
    int k = 1 + static_cast<int>(rng() % 3);
    if (n - 1 < 2 * k - 1) continue;
    if (!is_spanning_rk_flow_branching(d, d.all_arcs(), k)) continue;
    ++done;
    auto m = minimize_flow_branching(d, d.all_arcs(), k);
    EXPECT_TRUE(is_spanning_rk_flow_branching(d, m, k));
    EXPECT_TRUE(is_triple_free(d, m));
    for (ArcId a : m) {
      auto less = m;
      less.erase(a);
      EXPECT_FALSE(is_spanning_rk_flow_branching(d, less, k));
    }
  }
  EXPECT_GE(done, 200);
}
