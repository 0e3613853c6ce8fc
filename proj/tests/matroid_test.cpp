#include <gtest/gtest.h>

#include "balpack/matroid.hpp"
#include "support.hpp"

using namespace balpack;
using namespace testing_support;

namespace {

bool contains_all(const std::vector<int>& tree, const EdgeSelection& x) {
  for (EdgeId e : x)
    if (!std::binary_search(tree.begin(), tree.end(), e)) return false;
  return true;
}

bool disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  for (int e : a)
    if (std::binary_search(b.begin(), b.end(), e)) return false;
  return true;
}

bool brute_completable(const RootedGraph& g, const EdgeSelection& x1, const EdgeSelection& x2) {
  auto trees = brute_spanning_trees(g);
  for (const auto& t1 : trees) {
    if (!contains_all(t1, x1)) continue;
    for (const auto& t2 : trees)
      if (contains_all(t2, x2) && disjoint(t1, t2)) return true;
  }
  return false;
}

// Forest check by relaxation-free union of labels.
bool brute_forest(const RootedGraph& g, const std::vector<int>& edges) {
  std::vector<int> comp(static_cast<std::size_t>(g.num_vertices()));
  for (int v = 0; v < g.num_vertices(); ++v) comp[static_cast<std::size_t>(v)] = v;
  for (int e : edges) {
    int a = comp[static_cast<std::size_t>(g.edge(e).u)], b = comp[static_cast<std::size_t>(g.edge(e).v)];
    if (a == b) return false;
    for (int& c : comp)
      if (c == b) c = a;
  }
  return true;
}

int brute_union_rank(const RootedGraph& g) {
  const int m = g.num_edges();
  int best = 0;
  // Assign each edge to side 0, side 1 or neither.
  std::vector<int> side(static_cast<std::size_t>(m), 0);
  while (true) {
    std::vector<int> s0, s1;
    for (int e = 0; e < m; ++e) {
      if (side[static_cast<std::size_t>(e)] == 1) s0.push_back(e);
      if (side[static_cast<std::size_t>(e)] == 2) s1.push_back(e);
    }
    if (brute_forest(g, s0) && brute_forest(g, s1))
      best = std::max(best, static_cast<int>(s0.size() + s1.size()));
    int i = 0;
    while (i < m && side[static_cast<std::size_t>(i)] == 2) side[static_cast<std::size_t>(i++)] = 0;
    if (i == m) return best;
    ++side[static_cast<std::size_t>(i)];
  }
}

// Union-rank formula: min over F ⊆ E of |E - F| + 2 r(F).
int formula_union_rank(const RootedGraph& g) {
  const int m = g.num_edges();
  int best = 1 << 30;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> comp(static_cast<std::size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) comp[static_cast<std::size_t>(v)] = v;
    int rank = 0, outside = 0;
    for (int e = 0; e < m; ++e) {
      if (!(mask >> e & 1u)) {
        ++outside;
        continue;
      }
      int a = comp[static_cast<std::size_t>(g.edge(e).u)], b = comp[static_cast<std::size_t>(g.edge(e).v)];
      if (a == b) continue;
      ++rank;
      for (int& c : comp)
        if (c == b) c = a;
    }
    best = std::min(best, outside + 2 * rank);
  }
  return best;
}

void expect_valid_mapping(const RootedGraph& g, const EdgeSelection& t1, const EdgeSelection& t2,
                          const TreeMapping& sigma) {
  ASSERT_EQ(sigma.sigma.size(), t1.size());
  for (auto [e, f] : sigma.sigma) {
    EXPECT_TRUE(t1.contains(e));
    EXPECT_TRUE(t2.contains(f));
    auto a = t1;
    a.erase(e);
    a.insert(f);
    auto b = t2;
    b.erase(f);
    b.insert(e);
    EXPECT_TRUE(brute_spanning_tree(g, a.ids()));
    EXPECT_TRUE(brute_spanning_tree(g, b.ids()));
  }
  // Three T1-edges at one vertex hit at least two images.
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    std::vector<std::pair<EdgeId, EdgeId>> at;
    for (auto p : sigma.sigma)
      if (g.edge(p.first).u == v || g.edge(p.first).v == v) at.push_back(p);
    for (std::size_t i = 0; i < at.size(); ++i)
      for (std::size_t j = i + 1; j < at.size(); ++j)
        for (std::size_t l = j + 1; l < at.size(); ++l)
          EXPECT_FALSE(at[i].second == at[j].second && at[j].second == at[l].second);
  }
}

}  // namespace

TEST(Completable, DoubledStar) {
  RootedGraph g(3, 0, {{0, 1}, {0, 1}, {0, 2}, {0, 2}});
  EXPECT_TRUE(is_completable_pair(g, {0}, {3}));
  auto bases = find_disjoint_bases(g, {0}, {3});
  ASSERT_TRUE(bases);
  EXPECT_TRUE(bases->first.contains(0));
  EXPECT_TRUE(bases->second.contains(3));
  EXPECT_TRUE(brute_spanning_tree(g, bases->first.ids()));
  EXPECT_TRUE(brute_spanning_tree(g, bases->second.ids()));
  EXPECT_TRUE(bases->first.disjoint_from(bases->second));
}

TEST(Completable, TriangleFails) {
  RootedGraph g(3, 0, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_FALSE(is_completable_pair(g, {}, {}));
  EXPECT_FALSE(find_disjoint_bases(g, {}, {}));
  EXPECT_FALSE(has_two_disjoint_spanning_trees(g));
}

TEST(Completable, K4HasTwoTrees) {
  RootedGraph g(4, 0, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto bases = find_disjoint_bases(g, {}, {});
  ASSERT_TRUE(bases);
  EXPECT_TRUE(brute_spanning_tree(g, bases->first.ids()));
  EXPECT_TRUE(brute_spanning_tree(g, bases->second.ids()));
  EXPECT_TRUE(bases->first.disjoint_from(bases->second));
  EXPECT_TRUE(has_two_disjoint_spanning_trees(g));
}

TEST(Completable, ContractViolations) {
  RootedGraph g(3, 0, {{0, 1}, {1, 2}, {0, 2}, {0, 1}});
  EXPECT_THROW(is_completable_pair(g, {0, 1, 2}, {}), ContractError);
  EXPECT_THROW(is_completable_pair(g, {0}, {0}), ContractError);
}

TEST(TwoTrees, Examples) {
  RootedGraph doubled(4, 0, {{0, 1}, {0, 1}, {1, 2}, {1, 2}, {1, 3}, {1, 3}});
  EXPECT_TRUE(has_two_disjoint_spanning_trees(doubled));
  RootedGraph tree(4, 0, {{0, 1}, {1, 2}, {1, 3}});
  EXPECT_FALSE(has_two_disjoint_spanning_trees(tree));
  RootedGraph cycle(5, 0, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  EXPECT_FALSE(has_two_disjoint_spanning_trees(cycle));
  EXPECT_TRUE(has_two_disjoint_spanning_trees(RootedGraph(1, 0, {})));
}

TEST(Completable, AgreesWithTreePairEnumeration) {
  std::mt19937_64 rng(47);
  for (int iter = 0; iter < 250; ++iter) {
    int n = 1 + static_cast<int>(rng() % 6);
    auto g = random_graph(rng, n, static_cast<int>(rng() % 12));
    // Random disjoint forests.
    std::vector<int> f1, f2;
    for (int e = 0; e < g.num_edges(); ++e) {
      int roll = static_cast<int>(rng() % 6);
      if (roll == 0) {
        f1.push_back(e);
        if (!brute_forest(g, f1)) f1.pop_back();
      } else if (roll == 1) {
        f2.push_back(e);
        if (!brute_forest(g, f2)) f2.pop_back();
      }
    }
    EdgeSelection x1(f1), x2(f2);
    bool expect = brute_completable(g, x1, x2);
    auto bases = find_disjoint_bases(g, x1, x2);
    ASSERT_EQ(bases.has_value(), expect);
    EXPECT_EQ(is_completable_pair(g, x1, x2), expect);
    if (bases) {
      EXPECT_TRUE(brute_spanning_tree(g, bases->first.ids()));
      EXPECT_TRUE(brute_spanning_tree(g, bases->second.ids()));
      EXPECT_TRUE(bases->first.disjoint_from(bases->second));
      EXPECT_TRUE(contains_all(bases->first.ids(), x1));
      EXPECT_TRUE(contains_all(bases->second.ids(), x2));
      // A hint never changes the answer.
      auto again = find_disjoint_bases(g, x1, x2, bases);
      ASSERT_TRUE(again);
      EXPECT_EQ(*again, *bases);
    }
    if (f1.empty() && f2.empty()) {
      EXPECT_EQ(expect, has_two_disjoint_spanning_trees(g));
    }
  }
}

TEST(UnionRank, MatchesEnumerationAndFormula) {
  std::mt19937_64 rng(53);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 1 + static_cast<int>(rng() % 5);
    auto g = random_graph(rng, n, static_cast<int>(rng() % 9));
    int rank = union_rank(g);
    EXPECT_EQ(rank, brute_union_rank(g));
    EXPECT_EQ(rank, formula_union_rank(g));
  }
}

TEST(TreeMapping, Identity) {
  RootedGraph g(4, 0, {{0, 1}, {1, 2}, {1, 3}, {2, 3}});
  EdgeSelection t{0, 1, 2};
  auto sigma = tree_mapping(g, t, t);
  for (auto [e, f] : sigma.sigma) EXPECT_EQ(e, f);
  EXPECT_TRUE(sigma.bijective);
}

TEST(TreeMapping, Triangle) {
  // Edges: ra=0, rb=1, ab=2.
  RootedGraph g(3, 0, {{0, 1}, {0, 2}, {1, 2}});
  auto sigma = tree_mapping(g, {0, 1}, {0, 2});
  EXPECT_EQ(sigma(0), 0);
  EXPECT_EQ(sigma(1), 2);
  EXPECT_THROW(tree_mapping(g, {0}, {0, 2}), ContractError);
}

TEST(TreeMapping, RandomValidity) {
  std::mt19937_64 rng(59);
  int done = 0;
  for (int iter = 0; done < 200 && iter < 5000; ++iter) {
    int n = 2 + static_cast<int>(rng() % 6);
    auto g = random_graph(rng, n, n + static_cast<int>(rng() % 8));
    auto trees = brute_spanning_trees(g);
    if (trees.empty()) continue;
    const auto& a = trees[rng() % trees.size()];
    const auto& b = trees[rng() % trees.size()];
    EdgeSelection t1(a), t2(b);
    ++done;
    expect_valid_mapping(g, t1, t2, tree_mapping(g, t1, t2));
  }
  EXPECT_GE(done, 200);
}
