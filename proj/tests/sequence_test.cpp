#include "proptest/sequence.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "proptest/random.hpp"

using namespace proptest;

TEST(HistogramTest, WorkedExample) {
  IntSequence s = make_sequence({1, 2, 1, 3, 2, 1, 4}, 3);
  Histogram h = histogram(s);
  EXPECT_EQ(h.at(1), 2);  // values 3 and 4
  EXPECT_EQ(h.at(2), 1);  // value 2
  EXPECT_EQ(h.at(3), 1);  // value 1
  EXPECT_EQ(h.distinct_values(), 4);
}

TEST(HistogramTest, AllDistinctAndAllPairs) {
  IntSequence distinct = make_sequence({4, 7, 9, 12}, 1);
  EXPECT_EQ(histogram(distinct).at(1), 4);
  IntSequence pair = make_sequence({5, 5}, 2);
  EXPECT_EQ(histogram(pair).at(2), 1);
  EXPECT_EQ(histogram(pair).at(1), 0);
}

TEST(MakeSequence, EnforcesCapAndPositivity) {
  EXPECT_THROW(make_sequence({1, 1, 1}, 2), OccurrenceCapExceeded);
  EXPECT_THROW(make_sequence({0, 1}, 2), ValueOutOfRange);
  EXPECT_THROW(make_sequence({-3}, 2), ValueOutOfRange);
  // Values beyond n are fine for sequences themselves.
  IntSequence s = make_sequence({100, 200}, 1);
  EXPECT_EQ(s.n(), 2);
}

TEST(OccurrenceFreeness, Examples) {
  EXPECT_FALSE(is_k_occurrence_free(make_sequence({1, 1, 1}, 3), 3));
  EXPECT_TRUE(is_k_occurrence_free(make_sequence({1, 1, 2}, 3), 3));
  EXPECT_TRUE(is_k_occurrence_free(make_sequence({}, 3), 3));
}

TEST(Farness, Examples) {
  EXPECT_EQ(occurrence_farness(make_sequence({1, 1, 1}, 3), 3), Rational(1, 3));
  EXPECT_EQ(occurrence_farness(make_sequence({1, 2, 3}, 3), 3), Rational(0));
  // Two values occur three times out of twelve positions.
  IntSequence s = make_sequence({1, 1, 1, 2, 2, 2, 3, 4, 5, 6, 7, 8}, 3);
  EXPECT_EQ(occurrence_farness(s, 3), Rational(1, 6));
}

TEST(Farness, ZeroIffFree) {
  Rng rng(515);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<long long> values;
    long long len = 1 + static_cast<long long>(rng.below(12));
    for (long long i = 0; i < len; ++i)
      values.push_back(1 + static_cast<long long>(rng.below(5)));
    IntSequence s;
    try {
      s = make_sequence(values, 3);
    } catch (const OccurrenceCapExceeded&) {
      continue;
    }
    EXPECT_EQ(occurrence_farness(s, 3) == 0, is_k_occurrence_free(s, 3));
  }
}

TEST(Farness, InvariantUnderPositionShuffle) {
  Rng rng(8181);
  IntSequence s = make_sequence({1, 1, 1, 2, 2, 3, 4, 5, 5, 5, 6, 9}, 3);
  Rational base_farness = occurrence_farness(s, 3);
  Histogram base_hist = histogram(s);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<long long> shuffled = s.values;
    rng.shuffle(shuffled);
    IntSequence t = make_sequence(shuffled, 3);
    EXPECT_EQ(occurrence_farness(t, 3), base_farness);
    EXPECT_EQ(histogram(t).counts, base_hist.counts);
  }
}

TEST(SequenceIo, RoundTrip) {
  IntSequence s = make_sequence({3, 1, 4, 1, 5}, 2);
  std::ostringstream os;
  write_sequence(os, s);
  EXPECT_EQ(os.str(), "5 2\n3 1 4 1 5\n");
  std::istringstream is(os.str());
  IntSequence back = read_sequence(is);
  EXPECT_EQ(back.values, s.values);
  EXPECT_EQ(back.cap, s.cap);
}

TEST(SequenceIo, RejectsGarbage) {
  std::istringstream bad("nope");
  EXPECT_THROW(read_sequence(bad), IoError);
  std::istringstream truncated("4 2\n1 2\n");
  EXPECT_THROW(read_sequence(truncated), IoError);
}

TEST(SequenceAccessTest, MetersEveryRead) {
  IntSequence s = make_sequence({7, 8, 7}, 2);
  SequenceAccess access(s);
  EXPECT_EQ(access.value_at(1), 7);
  EXPECT_EQ(access.value_at(3), 7);
  EXPECT_EQ(access.value_at(1), 7);  // repeats cost again
  EXPECT_EQ(access.query_count(), 3);
  EXPECT_THROW(access.value_at(4), BadVertexIndex);
  EXPECT_EQ(access.query_count(), 3);
}
