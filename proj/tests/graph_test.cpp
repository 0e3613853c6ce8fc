#include <gtest/gtest.h>

#include <random>

#include "balpack/graph.hpp"

using namespace balpack;

TEST(Parse, DirectedWithMultiplicity) {
  auto inst = parse_instance("D 3 0\n0 1 2\n1 2\n");
  ASSERT_TRUE(inst.directed());
  const auto& d = inst.digraph();
  EXPECT_EQ(d.num_vertices(), 3);
  EXPECT_EQ(d.root(), 0);
  ASSERT_EQ(d.num_arcs(), 3);
  EXPECT_EQ(d.arc(0).tail, 0);
  EXPECT_EQ(d.arc(0).head, 1);
  EXPECT_EQ(d.arc(1).head, 1);
  EXPECT_EQ(d.arc(2).tail, 1);
  EXPECT_EQ(d.arc(2).head, 2);
  EXPECT_EQ(inst.kind, ProblemKind::arb);
}

TEST(Parse, Undirected) {
  auto inst = parse_instance("U 3 0\n0 1\n0 2\n");
  ASSERT_FALSE(inst.directed());
  EXPECT_EQ(inst.undirected().num_edges(), 2);
  EXPECT_EQ(inst.kind, ProblemKind::tree);
}

TEST(Parse, ArcIntoRootRejectedWithLine) {
  try {
    parse_instance("D 2 0\n1 0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find("root"), std::string::npos);
  }
}

TEST(Parse, MalformedInputs) {
  EXPECT_THROW(parse_instance("X 2 0\n"), ParseError);
  EXPECT_THROW(parse_instance("D 2 0\n1 1\n"), ParseError);
  EXPECT_THROW(parse_instance("D 2 0\n0 5\n"), ParseError);
  EXPECT_THROW(parse_instance("D 2 0\n0 1 0\n"), ParseError);
  EXPECT_THROW(parse_instance(""), ParseError);
  EXPECT_THROW(parse_instance("{\"kind\":\"D\"}"), ParseError);
}

TEST(Parse, CommentsAndJson) {
  auto a = parse_instance("# header next\nD 3 0 # root 0\n\n0 1\n1 2 # tail\n");
  EXPECT_EQ(a.digraph().num_arcs(), 2);
  auto b = parse_instance(R"({"kind":"flow","n":3,"root":0,"arcs":[[0,1,2],[1,2]],"k":2})");
  EXPECT_EQ(b.kind, ProblemKind::flow);
  EXPECT_EQ(b.k, 2);
  EXPECT_EQ(b.digraph().num_arcs(), 3);
}

TEST(Graph, ConstructorRejectsBadArcs) {
  EXPECT_THROW(RootedDigraph(2, 0, {{1, 0}}), GraphError);
  EXPECT_THROW(RootedDigraph(2, 0, {{1, 1}}), GraphError);
  EXPECT_THROW(RootedDigraph(0, 0, {}), GraphError);
  EXPECT_THROW(RootedGraph(2, 0, {{0, 0}}), GraphError);
}

TEST(Graph, CanonicalOrder) {
  RootedDigraph d(3, 0, {{1, 2}, {0, 2}, {0, 1}, {0, 2}});
  EXPECT_EQ(d.canonical_order(), (std::vector<ArcId>{2, 1, 3, 0}));
  EXPECT_EQ(d.out_neighbors(0), (std::vector<VertexId>{1, 2}));
}

TEST(CapParallel, ArbKeepsTwoLowest) {
  auto inst = parse_instance("D 2 0\n0 1 3\n");
  auto capped = cap_parallel_with_ids(inst);
  EXPECT_EQ(capped.instance.digraph().num_arcs(), 2);
  EXPECT_EQ(capped.original_id, (std::vector<int>{0, 1}));
}

TEST(CapParallel, FlowKeepsFour) {
  auto inst = parse_instance("D 3 0\n0 1\n1 2 5\n");
  inst.kind = ProblemKind::flow;
  EXPECT_EQ(cap_parallel(inst).digraph().num_arcs(), 5);
}

TEST(CapParallel, TreeUsesUnorderedPairs) {
  auto inst = parse_instance("U 2 0\n0 1\n1 0\n0 1\n");
  auto capped = cap_parallel_with_ids(inst);
  EXPECT_EQ(capped.original_id, (std::vector<int>{0, 1}));
}

TEST(CapParallel, IdempotentWithinCap) {
  auto inst = parse_instance("D 3 0\n0 1 2\n1 2\n0 2\n");
  EXPECT_EQ(serialize_instance(cap_parallel(inst)), serialize_instance(inst));
}

TEST(SubtreeSizes, Examples) {
  RootedDigraph path(3, 0, {{0, 1}, {1, 2}});
  EXPECT_EQ(subtree_sizes(path, {0, 1}), (std::map<VertexId, int>{{1, 2}, {2, 1}}));
  RootedDigraph star(3, 0, {{0, 1}, {0, 2}});
  EXPECT_EQ(subtree_sizes(star, {0, 1}), (std::map<VertexId, int>{{1, 1}, {2, 1}}));
  RootedDigraph fork(4, 0, {{0, 1}, {1, 2}, {1, 3}});
  EXPECT_EQ(subtree_sizes(fork, {0, 1, 2}), (std::map<VertexId, int>{{1, 3}, {2, 1}, {3, 1}}));
}

TEST(SubtreeSizes, RejectsNonArborescence) {
  RootedDigraph d(3, 0, {{0, 1}, {0, 1}, {1, 2}, {2, 1}});
  EXPECT_THROW(subtree_sizes(d, {0, 1}), StructureError);
  EXPECT_THROW(subtree_sizes(d, {2, 3}), StructureError);
}

TEST(HangingComponents, Examples) {
  RootedGraph path(3, 0, {{0, 1}, {1, 2}});
  EXPECT_EQ(hanging_component_sizes(path, {0, 1}), (std::map<VertexId, int>{{1, 1}, {2, 0}}));
  RootedGraph star(3, 0, {{0, 1}, {0, 2}});
  EXPECT_EQ(hanging_component_sizes(star, {0, 1}), (std::map<VertexId, int>{{1, 0}, {2, 0}}));
  RootedGraph fork(4, 0, {{0, 1}, {1, 2}, {1, 3}});
  EXPECT_EQ(hanging_component_sizes(fork, {0, 1, 2}), (std::map<VertexId, int>{{1, 2}, {2, 0}, {3, 0}}));
  RootedGraph tri(3, 0, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_THROW(hanging_component_sizes(tri, {0, 1, 2}), StructureError);
  EXPECT_THROW(hanging_component_sizes(tri, {1}), StructureError);
}

TEST(DuplicateEdges, Examples) {
  RootedGraph g(3, 0, {{0, 1}, {1, 2}, {0, 2}});
  auto one = duplicate_edges(g, 1);
  EXPECT_EQ(one.num_edges(), 3);
  auto two = duplicate_edges(g, 2);
  EXPECT_EQ(two.num_edges(), 6);
  EXPECT_EQ(two.num_vertices(), 3);
  EXPECT_EQ(two.edge(2).u, 1);
  EXPECT_EQ(two.edge(3).v, 2);
  EXPECT_THROW(duplicate_edges(g, 0), ContractError);
}

TEST(GraphProperties, RoundTripAndSums) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 1 + static_cast<int>(rng() % 7);
    std::vector<Arc> arcs;
    for (int a = 0; a < static_cast<int>(rng() % 15); ++a) {
      int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
      if (u != v && v != 0) arcs.push_back({u, v});
    }
    ProblemInstance inst{ProblemKind::arb, RootedDigraph(n, 0, arcs), 1};
    auto text = serialize_instance(inst);
    auto back = parse_instance(text);
    EXPECT_EQ(serialize_instance(back), text);
    ASSERT_EQ(back.digraph().num_arcs(), static_cast<int>(arcs.size()));
    for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
      EXPECT_EQ(back.digraph().arc(a).tail, arcs[static_cast<std::size_t>(a)].tail);
      EXPECT_EQ(back.digraph().arc(a).head, arcs[static_cast<std::size_t>(a)].head);
    }
    auto json_back = parse_instance(instance_to_json(inst).dump());
    EXPECT_EQ(serialize_instance(json_back), text);

    auto capped = cap_parallel(inst);
    EXPECT_EQ(serialize_instance(cap_parallel(capped)), serialize_instance(capped));
    EXPECT_LE(capped.digraph().num_arcs(), inst.digraph().num_arcs());

    // BFS arborescence: children of r sum to |V(X)| - 1.
    const auto& d = inst.digraph();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    seen[0] = 1;
    std::vector<int> queue{0}, chosen;
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
      for (ArcId a : d.out_arcs(queue[qi]))
        if (!seen[static_cast<std::size_t>(d.head(a))]) {
          seen[static_cast<std::size_t>(d.head(a))] = 1;
          chosen.push_back(a);
          queue.push_back(d.head(a));
        }
    ArcSelection x(chosen);
    auto sizes = subtree_sizes(d, x);
    int sum = 0;
    for (ArcId a : x)
      if (d.tail(a) == 0) sum += sizes[d.head(a)];
    EXPECT_EQ(sum, static_cast<int>(queue.size()) - 1);
  }
}

TEST(GraphProperties, HangingComponentsMonotoneAlongPaths) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 2 + static_cast<int>(rng() % 8);
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) edges.push_back({static_cast<int>(rng() % v), v});
    RootedGraph g(n, 0, edges);
    auto all = g.all_edges();
    auto sizes = hanging_component_sizes(g, all);
    auto parents = *tree_parents(g, all);
    for (int v = 1; v < n; ++v) {
      int desc = 0;
      for (int w = 1; w < n; ++w) {
        for (int u = parents[static_cast<std::size_t>(w)]; u != 0 && u != -1; u = parents[static_cast<std::size_t>(u)])
          if (u == v) ++desc;
      }
      EXPECT_EQ(sizes[v], desc);
      for (int u = parents[static_cast<std::size_t>(v)]; u != 0; u = parents[static_cast<std::size_t>(u)])
        EXPECT_LE(sizes[v], sizes[u]);
    }
  }
}
