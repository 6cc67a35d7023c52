#include "proptest/decompose.hpp"

#include <gtest/gtest.h>

#include <unordered_map>

#include "proptest/random.hpp"
#include "test_util.hpp"

using namespace proptest;

namespace {

// Strong connectivity of the padded block induced on its non-padding
// vertices, checked through a relabelled sub-digraph.
bool block_strongly_connected(const BoundedDigraph& padded,
                              const std::vector<Vertex>& block) {
  if (block.size() <= 1) return true;
  std::unordered_map<Vertex, Vertex> local;
  for (std::size_t i = 0; i < block.size(); ++i)
    local[block[i]] = static_cast<Vertex>(i + 1);
  EdgeList edges;
  for (Vertex u : block)
    for (Vertex v : padded.out_neighbors(u))
      if (local.count(v)) edges.emplace_back(local[u], local[v]);
  BoundedDigraph sub(static_cast<Vertex>(block.size()), padded.degree_bound(),
                     std::move(edges));
  auto components = strongly_connected_components(sub);
  return components.size() == 1;
}

}  // namespace

TEST(Scc, ThreeSourcePattern) {
  auto components = strongly_connected_components(testutil::three_source_pattern());
  std::vector<std::vector<Vertex>> expected{{1}, {2}, {3, 4, 5}, {6}, {7}};
  EXPECT_EQ(components, expected);
}

TEST(Scc, SingleVertex) {
  BoundedDigraph g(1, 0, {});
  auto components = strongly_connected_components(g);
  EXPECT_EQ(components, (std::vector<std::vector<Vertex>>{{1}}));
}

TEST(Scc, DirectedTriangleIsOneComponent) {
  BoundedDigraph g(3, 1, {{1, 2}, {2, 3}, {3, 1}});
  auto components = strongly_connected_components(g);
  EXPECT_EQ(components, (std::vector<std::vector<Vertex>>{{1, 2, 3}}));
}

TEST(Scc, DeepChainDoesNotOverflow) {
  const Vertex n = 50000;
  EdgeList edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace_back(v, v + 1);
  BoundedDigraph chain(n, 1, std::move(edges));
  EXPECT_EQ(strongly_connected_components(chain).size(), static_cast<std::size_t>(n));
}

TEST(WeaklyConnected, Examples) {
  EXPECT_TRUE(is_weakly_connected(testutil::three_source_pattern()));
  EXPECT_FALSE(is_weakly_connected(BoundedDigraph(2, 0, {})));
  EXPECT_TRUE(is_weakly_connected(BoundedDigraph(1, 0, {})));
}

TEST(Decompose, ThreeSourcePattern) {
  PatternDecomposition dec = decompose_pattern(testutil::three_source_pattern());
  EXPECT_EQ(dec.k, 3);
  ASSERT_EQ(dec.sources.size(), 3u);
  EXPECT_EQ(dec.sources[0], (std::vector<Vertex>{1}));
  EXPECT_EQ(dec.sources[1], (std::vector<Vertex>{3, 4, 5}));
  EXPECT_EQ(dec.sources[2], (std::vector<Vertex>{6}));
  EXPECT_EQ(dec.center, (std::vector<Vertex>{2, 7}));
  EXPECT_EQ(dec.n_comp, 3);
  EXPECT_EQ(dec.n_center, 2);
}

TEST(Decompose, KStar) {
  PatternDecomposition dec = decompose_pattern(make_k_star(3));
  EXPECT_EQ(dec.k, 3);
  for (const auto& source : dec.sources) EXPECT_EQ(source.size(), 1u);
  EXPECT_EQ(dec.center, (std::vector<Vertex>{4}));
  EXPECT_EQ(dec.n_comp, 1);
  EXPECT_EQ(dec.n_center, 1);
}

TEST(Decompose, RejectsDisconnectedAndSingleSource) {
  BoundedDigraph two_edges(4, 1, {{1, 2}, {3, 4}});
  EXPECT_THROW(decompose_pattern(two_edges), NotWeaklyConnected);
  BoundedDigraph one_edge(2, 1, {{1, 2}});
  EXPECT_THROW(decompose_pattern(one_edge), TooFewSources);
}

TEST(PadAndIndex, ThreeSourcePatternLayout) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  EXPECT_EQ(dec.padded_vertex_count(), 11);  // 2 + 3*3
  EXPECT_EQ(dec.padded.vertex_count(), 11);
  // Center block {1,2} <-> {2,7}; C_1' = {3} plus padding {4,5};
  // C_2' = {6,7,8} <-> {3,4,5}; C_3' = {9} plus padding {10,11}.
  EXPECT_EQ(dec.index_map[2], 1);
  EXPECT_EQ(dec.index_map[7], 2);
  EXPECT_EQ(dec.index_map[1], 3);
  EXPECT_EQ(dec.index_map[3], 6);
  EXPECT_EQ(dec.index_map[4], 7);
  EXPECT_EQ(dec.index_map[5], 8);
  EXPECT_EQ(dec.index_map[6], 9);
  EXPECT_EQ(dec.crossing_edges, (EdgeList{{3, 1}, {6, 1}, {9, 2}}));
  EXPECT_EQ(dec.padded.edge_count(), 7);
  EXPECT_TRUE(dec.padded.has_edge(2, 1));  // v7 -> v2 inside the center
  EXPECT_TRUE(dec.padded.has_edge(7, 6));  // v4 -> v3
  EXPECT_TRUE(dec.padded.has_edge(6, 8));  // v3 -> v5
  EXPECT_TRUE(dec.padded.has_edge(8, 7));  // v5 -> v4
  for (Vertex padding : {4, 5, 10, 11}) {
    EXPECT_EQ(dec.padded.out_degree(padding), 0);
    EXPECT_EQ(dec.padded.in_degree(padding), 0);
  }
}

TEST(PadAndIndex, KStarNeedsNoPadding) {
  PatternDecomposition dec = decompose_and_index(make_k_star(3));
  EXPECT_EQ(dec.padded_vertex_count(), 4);
  EXPECT_EQ(dec.padded.edge_count(), 3);
  EXPECT_EQ(dec.crossing_edges.size(), 3u);
}

TEST(PadAndIndex, UniformSourcesMeanZeroPadding) {
  // Two 2-cycles feeding a single center: all sources already have size
  // N_comp, so the padded pattern is just a reassembly.
  BoundedDigraph h(5, 2, {{1, 2}, {2, 1}, {3, 4}, {4, 3}, {2, 5}, {4, 5}});
  PatternDecomposition dec = decompose_and_index(h);
  EXPECT_EQ(dec.k, 2);
  EXPECT_EQ(dec.n_comp, 2);
  EXPECT_EQ(dec.n_center, 1);
  EXPECT_EQ(dec.padded.vertex_count(), 5);
  EXPECT_EQ(dec.padded.edge_count(), h.edge_count());
}

TEST(PadAndIndex, PlantedPatternsRecoverAndReassemble) {
  Rng rng(60601);
  for (int rep = 0; rep < 50; ++rep) {
    testutil::PlantedPattern planted = testutil::planted_pattern(rng);
    PatternDecomposition dec = decompose_and_index(planted.graph);

    // Recovered partition matches the construction.
    EXPECT_EQ(dec.sources, planted.sources);
    EXPECT_EQ(dec.center, planted.center);

    // Reassembly: padded restricted to non-padding vertices is the original
    // pattern under index_map (same edge count, every edge present).
    EXPECT_EQ(dec.padded.edge_count(), planted.graph.edge_count());
    for (const auto& [u, v] : planted.graph.edges())
      EXPECT_TRUE(dec.padded.has_edge(dec.index_map[static_cast<std::size_t>(u)],
                                      dec.index_map[static_cast<std::size_t>(v)]));

    // Crossing edges leave a source block and enter the center block; no
    // edges connect distinct source blocks.
    for (const auto& [u, v] : dec.padded.edges()) {
      bool u_center = u <= dec.n_center;
      bool v_center = v <= dec.n_center;
      if (u_center) {
        EXPECT_TRUE(v_center);  // the center never feeds sources
      } else if (!v_center) {
        long long block_u = (u - dec.n_center - 1) / dec.n_comp;
        long long block_v = (v - dec.n_center - 1) / dec.n_comp;
        EXPECT_EQ(block_u, block_v);
      }
    }
    for (const auto& [u, v] : dec.crossing_edges) {
      EXPECT_GT(u, dec.n_center);
      EXPECT_LE(v, dec.n_center);
    }

    // Every non-padding block is strongly connected.
    for (int c = 0; c < dec.k; ++c) {
      std::vector<Vertex> block;
      for (Vertex member : dec.sources[static_cast<std::size_t>(c)])
        block.push_back(dec.index_map[static_cast<std::size_t>(member)]);
      EXPECT_TRUE(block_strongly_connected(dec.padded, block));
    }

    // Determinism: a second run yields identical results.
    PatternDecomposition again = decompose_and_index(planted.graph);
    EXPECT_EQ(again.index_map, dec.index_map);
    EXPECT_EQ(again.padded, dec.padded);
    EXPECT_EQ(again.crossing_edges, dec.crossing_edges);
  }
}

TEST(Describe, MentionsTheLayout) {
  std::string report = describe(decompose_and_index(testutil::three_source_pattern()));
  EXPECT_NE(report.find("k=3"), std::string::npos);
  EXPECT_NE(report.find("N_comp=3"), std::string::npos);
  EXPECT_NE(report.find("N_center=2"), std::string::npos);
  EXPECT_NE(report.find("C_2 = {3,4,5}"), std::string::npos);
}
