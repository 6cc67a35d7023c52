#include "proptest/reduction.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "proptest/distribution.hpp"
#include "proptest/random.hpp"
#include "proptest/subgraph.hpp"
#include "test_util.hpp"

using namespace proptest;

namespace {

IntSequence worked_sequence() { return make_sequence({1, 2, 1, 3, 2, 1}, 3); }

IntSequence random_capped_sequence(Rng& rng, long long n, int k) {
  for (;;) {
    std::vector<long long> values;
    for (long long i = 0; i < n; ++i)
      values.push_back(1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(n))));
    try {
      return make_sequence(values, k);
    } catch (const OccurrenceCapExceeded&) {
    }
  }
}

}  // namespace

TEST(ReducedIndexingTest, WorkedGeometry) {
  // n=6 positions, N_comp=3, N_center=2: 18 source vertices, 12 center ones.
  ReducedIndexing idx{6, 3, 2};
  EXPECT_EQ(idx.total_vertices(), 30);
  EXPECT_EQ(idx.source_part_size(), 18);
  EXPECT_FALSE(idx.in_center_part(18));
  EXPECT_TRUE(idx.in_center_part(19));
  EXPECT_EQ(idx.source_position(1), 1);
  EXPECT_EQ(idx.source_position(3), 1);
  EXPECT_EQ(idx.source_position(4), 2);
  EXPECT_EQ(idx.source_local(4), 1);
  EXPECT_EQ(idx.source_local(6), 3);
  EXPECT_EQ(idx.center_copy(19), 1);
  EXPECT_EQ(idx.center_copy(26), 4);
  EXPECT_EQ(idx.center_local(26), 2);
  EXPECT_EQ(idx.center_vertex(4, 2), 26);
  EXPECT_EQ(idx.source_vertex(2, 1), 4);
}

TEST(BuildOffline, WorkedInstanceHasExactlyOneCopy) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  IntSequence s = worked_sequence();
  for (std::uint64_t seed : {1ull, 2ull, 99ull, 123456ull}) {
    BoundedDigraph g = build_offline(s, dec, seed);
    EXPECT_EQ(g.vertex_count(), 30);
    EXPECT_EQ(g.degree_bound(), 3);
    // Only value 1 occurs three times, so exactly one pattern copy appears.
    EXPECT_EQ(count_subgraph_copies(g, dec.pattern), 1u);
    EXPECT_EQ(disjoint_copy_lower_bound(g, dec.pattern), 1u);
  }
}

TEST(BuildOffline, AllDistinctValuesGiveNoCopies) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  IntSequence s = make_sequence({1, 2, 3, 4, 5}, 3);
  BoundedDigraph g = build_offline(s, dec, 7);
  EXPECT_EQ(count_subgraph_copies(g, dec.pattern), 0u);
}

TEST(BuildOffline, FullyRepeatedValueGivesOneCopy) {
  for (const BoundedDigraph& pattern :
       {make_k_star(3), testutil::three_source_pattern()}) {
    PatternDecomposition dec = decompose_and_index(pattern);
    IntSequence s = make_sequence({1, 1, 1}, 3);
    BoundedDigraph g = build_offline(s, dec, 11);
    EXPECT_EQ(count_subgraph_copies(g, pattern), 1u);
  }
}

TEST(BuildOffline, DegreePreservation) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  BoundedDigraph g = build_offline(worked_sequence(), dec, 3);
  EXPECT_EQ(g.max_degree(), dec.pattern.max_degree());
  // Without any k-occurring value the maximum degree can only drop.
  BoundedDigraph sparse = build_offline(make_sequence({1, 2, 3}, 3), dec, 3);
  EXPECT_LE(sparse.max_degree(), dec.pattern.max_degree());
}

TEST(BuildOffline, RejectsValuesBeyondLength) {
  PatternDecomposition dec = decompose_and_index(make_k_star(3));
  IntSequence s = make_sequence({1, 9, 2}, 3);  // value 9 > n = 3
  EXPECT_THROW(build_offline(s, dec, 1), ValueOutOfRange);
}

TEST(BuildOffline, RejectsCapBeyondSourceCount) {
  PatternDecomposition dec = decompose_and_index(make_k_star(3));
  // Cap 4 sequence against a 3-source pattern: the fourth occurrence has no
  // type left to draw.
  IntSequence s = make_sequence({1, 1, 1, 1}, 4);
  EXPECT_THROW(build_offline(s, dec, 1), OccurrenceCapExceeded);
}

TEST(BuildOffline, DeterministicPerSeed) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  IntSequence s = worked_sequence();
  EXPECT_EQ(build_offline(s, dec, 42), build_offline(s, dec, 42));
}

TEST(TypeAssignment, CoversWithoutRepeats) {
  Rng rng(808);
  for (int rep = 0; rep < 20; ++rep) {
    IntSequence s = random_capped_sequence(rng, 12, 3);
    std::vector<int> types = offline_type_assignment(s, 3, rng.next_u64());
    std::unordered_map<long long, std::set<int>> per_value;
    for (long long a = 1; a <= s.n(); ++a) {
      int t = types[static_cast<std::size_t>(a)];
      EXPECT_GE(t, 1);
      EXPECT_LE(t, 3);
      EXPECT_TRUE(per_value[s.at(a)].insert(t).second);  // no repeated type
    }
  }
}

TEST(ReductionOracleTest, FreshOracleStartsCold) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  IntSequence s = worked_sequence();
  SequenceAccess access(s);
  ReductionOracle oracle(access, dec, 5);
  EXPECT_EQ(oracle.vertex_count(), 30);
  EXPECT_EQ(oracle.sequence_query_count(), 0);
  for (long long a = 1; a <= s.n(); ++a) EXPECT_EQ(oracle.type_array()[a], 0);
  EXPECT_EQ(oracle.remaining_types(1), (std::vector<int>{1, 2, 3}));
}

TEST(ReductionOracleTest, TrivialSizes) {
  PatternDecomposition dec = decompose_and_index(make_k_star(2));
  IntSequence one = make_sequence({1}, 2);
  SequenceAccess a1(one);
  EXPECT_EQ(ReductionOracle(a1, dec, 0).vertex_count(), 2);  // N_comp + N_center
  IntSequence empty = make_sequence({}, 2);
  SequenceAccess a0(empty);
  ReductionOracle oracle(a0, dec, 0);
  EXPECT_EQ(oracle.vertex_count(), 0);
  EXPECT_THROW(oracle.out_neighbor(1, 1), BadVertexIndex);
}

TEST(ReductionOracleTest, CenterCaseNeedsNoSequenceQuery) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  IntSequence s = worked_sequence();
  SequenceAccess access(s);
  ReductionOracle oracle(access, dec, 5);
  // Vertex 26 is local v7 in center copy 4; its single out-edge is v7->v2,
  // landing on vertex 25. Independent of the sequence and the seed.
  EXPECT_EQ(oracle.out_neighbor(26, 1), std::optional<Vertex>(25));
  EXPECT_EQ(oracle.out_neighbor(26, 2), std::nullopt);
  for (Vertex v = 19; v <= 30; ++v)
    for (long long i = 1; i <= 4; ++i) oracle.out_neighbor(v, i);
  EXPECT_EQ(oracle.sequence_query_count(), 0);
  EXPECT_EQ(access.query_count(), 0);
}

TEST(ReductionOracleTest, CrossingEdgeTargetsTheValueCenterCopy) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  IntSequence s = worked_sequence();
  SequenceAccess access(s);
  ReductionOracle oracle(access, dec, 5);
  std::vector<int> types = offline_type_assignment(s, dec.k, 5);
  for (long long a = 1; a <= s.n(); ++a) {
    if (types[static_cast<std::size_t>(a)] != 1) continue;
    // Type 1 block: local vertex 1 plays v1, whose only edge is the crossing
    // v1 -> v2, i.e. C_0 index 1 of the value's center copy.
    Vertex v = (a - 1) * dec.n_comp + 1;
    long long b = s.at(a);
    EXPECT_EQ(oracle.out_neighbor(v, 1),
              std::optional<Vertex>(18 + (b - 1) * dec.n_center + 1));
    // Padding locals 2 and 3 of a type-1 block are isolated.
    EXPECT_EQ(oracle.out_neighbor(v + 1, 1), std::nullopt);
    EXPECT_EQ(oracle.out_neighbor(v + 2, 1), std::nullopt);
  }
}

TEST(ReductionOracleTest, QueryThrift) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  IntSequence s = worked_sequence();
  SequenceAccess access(s);
  ReductionOracle oracle(access, dec, 5);
  std::set<long long> positions_probed;
  Rng rng(9);
  long long graph_queries = 0;
  for (int step = 0; step < 400; ++step) {
    Vertex v = 1 + static_cast<Vertex>(rng.below(30));
    oracle.out_neighbor(v, 1 + static_cast<long long>(rng.below(3)));
    ++graph_queries;
    if (!ReducedIndexing{6, 3, 2}.in_center_part(v))
      positions_probed.insert(ReducedIndexing{6, 3, 2}.source_position(v));
  }
  EXPECT_EQ(oracle.sequence_query_count(),
            static_cast<long long>(positions_probed.size()));
  EXPECT_LE(oracle.sequence_query_count(), graph_queries);
  EXPECT_EQ(access.query_count(), oracle.sequence_query_count());
}

TEST(ReductionOracleTest, AnswersIndependentOfProbeOrder) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  IntSequence s = worked_sequence();
  const long long total = 30;
  const long long max_i = dec.pattern.max_degree() + 1;

  std::vector<std::pair<Vertex, long long>> probes;
  for (Vertex v = 1; v <= total; ++v)
    for (long long i = 1; i <= max_i; ++i) probes.emplace_back(v, i);

  std::map<std::pair<Vertex, long long>, std::optional<Vertex>> forward;
  {
    SequenceAccess access(s);
    ReductionOracle oracle(access, dec, 31);
    for (const auto& [v, i] : probes) forward[{v, i}] = oracle.out_neighbor(v, i);
  }
  Rng rng(66);
  for (int rep = 0; rep < 5; ++rep) {
    auto shuffled = probes;
    rng.shuffle(shuffled);
    SequenceAccess access(s);
    ReductionOracle oracle(access, dec, 31);
    for (const auto& [v, i] : shuffled)
      EXPECT_EQ(oracle.out_neighbor(v, i), forward[{v, i}]) << v << "," << i;
  }
}

TEST(ReductionOracleTest, LazyTypesMatchOffline) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  IntSequence s = worked_sequence();
  SequenceAccess access(s);
  ReductionOracle oracle(access, dec, 77);
  for (Vertex v = 1; v <= 18; ++v) oracle.out_neighbor(v, 1);
  EXPECT_EQ(oracle.type_array(), offline_type_assignment(s, dec.k, 77));
}

TEST(ConsistencyCheck, WorkedInstanceAndRandomInstances) {
  PatternDecomposition star_dec = decompose_and_index(make_k_star(3));
  PatternDecomposition pattern_dec =
      decompose_and_index(testutil::three_source_pattern());
  EXPECT_TRUE(consistency_check(worked_sequence(), pattern_dec, 123));
  Rng rng(5150);
  for (int rep = 0; rep < 20; ++rep) {
    long long n = 1 + static_cast<long long>(rng.below(20));
    IntSequence s = random_capped_sequence(rng, n, 3);
    std::uint64_t seed = rng.next_u64();
    EXPECT_TRUE(consistency_check(s, star_dec, seed));
    EXPECT_TRUE(consistency_check(s, pattern_dec, seed));
  }
}

TEST(SoundnessAndCompleteness, CopiesMatchKOccurrences) {
  Rng rng(24601);
  for (const BoundedDigraph& pattern :
       {make_k_star(3), testutil::three_source_pattern()}) {
    PatternDecomposition dec = decompose_and_index(pattern);
    for (int rep = 0; rep < 25; ++rep) {
      long long n = 1 + static_cast<long long>(rng.below(7));
      IntSequence s = random_capped_sequence(rng, n, 3);
      BoundedDigraph g = build_offline(s, dec, rng.next_u64());
      unsigned long long expected =
          static_cast<unsigned long long>(histogram(s).at(3));
      EXPECT_EQ(count_subgraph_copies(g, pattern), expected);
      if (is_k_occurrence_free(s, 3))
        EXPECT_EQ(count_subgraph_copies(g, pattern), 0u);
    }
  }
}

TEST(DistanceTransfer, Examples) {
  PatternDecomposition dec = decompose_and_index(testutil::three_source_pattern());
  EXPECT_EQ(distance_transfer(Rational(1, 6), 2, dec), Rational(1, 60));
  EXPECT_EQ(distance_transfer(Rational(0), 2, dec), Rational(0));
  PatternDecomposition star2 = decompose_and_index(make_k_star(2));
  EXPECT_EQ(distance_transfer(Rational(1, 3), 1, star2), Rational(1, 6));
  EXPECT_THROW(distance_transfer(Rational(1, 3), 0, star2), InvalidParameter);
}

TEST(TypeSidecar, Format) {
  std::ostringstream os;
  write_type_sidecar(os, 42, {0, 2, 1, 3});
  EXPECT_EQ(os.str(), "seed 42\n2 1 3\n");
}
