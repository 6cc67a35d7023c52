#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "proptest/errors.hpp"
#include "proptest/rational.hpp"

namespace proptest {

// Integer sequence with an occurrence cap: every value appears at most `cap`
// times. Values are positive and may exceed n.
struct IntSequence {
  std::vector<long long> values;  // positions 1..n
  int cap = 0;

  long long n() const { return static_cast<long long>(values.size()); }
  long long at(long long position) const {  // 1-based
    if (position < 1 || position > n())
      throw BadVertexIndex("sequence position " + std::to_string(position) +
                           " out of range [1," + std::to_string(n()) + "]");
    return values[static_cast<std::size_t>(position - 1)];
  }
};

inline IntSequence make_sequence(std::vector<long long> values, int cap) {
  if (cap < 0) throw InvalidParameter("occurrence cap must be non-negative");
  std::unordered_map<long long, long long> counts;
  for (long long v : values) {
    if (v < 1) throw ValueOutOfRange("sequence values must be positive, got " +
                                     std::to_string(v));
    if (++counts[v] > cap)
      throw OccurrenceCapExceeded("value " + std::to_string(v) + " occurs more than " +
                                  std::to_string(cap) + " times");
  }
  return IntSequence{std::move(values), cap};
}

// Frequency-of-frequencies map: counts[i] = number of distinct values
// occurring exactly i times.
struct Histogram {
  std::map<long long, long long> counts;

  long long at(long long frequency) const {
    auto it = counts.find(frequency);
    return it == counts.end() ? 0 : it->second;
  }
  long long distinct_values() const {
    long long total = 0;
    for (const auto& [freq, cnt] : counts) total += cnt;
    return total;
  }
};

inline Histogram histogram(const IntSequence& s) {
  std::unordered_map<long long, long long> occurrences;
  for (long long v : s.values) ++occurrences[v];
  Histogram h;
  for (const auto& [value, freq] : occurrences) ++h.counts[freq];
  return h;
}

inline bool is_k_occurrence_free(const IntSequence& s, int k) {
  return histogram(s).at(k) == 0;
}

// Exact distance to k-occurrence-freeness, as a fraction of n: one position
// of each k-occurring value must change (to a fresh value), and no single
// change removes two k-occurring values.
inline Rational occurrence_farness(const IntSequence& s, int k) {
  if (s.n() == 0) return 0;
  return Rational(histogram(s).at(k), s.n());
}

// Sequence file format: first line "n k", second line n positive integers.
inline IntSequence read_sequence(std::istream& is) {
  long long n;
  int k;
  if (!(is >> n >> k)) throw IoError("bad sequence header (want: n k)");
  std::vector<long long> values(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i)
    if (!(is >> values[static_cast<std::size_t>(i)])) throw IoError("truncated sequence");
  return make_sequence(std::move(values), k);
}

inline void write_sequence(std::ostream& os, const IntSequence& s) {
  os << s.n() << ' ' << s.cap << '\n';
  for (long long i = 0; i < s.n(); ++i)
    os << (i ? " " : "") << s.values[static_cast<std::size_t>(i)];
  os << '\n';
}

inline IntSequence read_sequence_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open sequence file: " + path);
  return read_sequence(is);
}

inline void write_sequence_file(const std::string& path, const IntSequence& s) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write sequence file: " + path);
  write_sequence(os, s);
}

// Metered position -> value access; one query per read, repeats included.
class SequenceAccess {
 public:
  explicit SequenceAccess(const IntSequence& sequence) : sequence_(sequence) {}

  long long value_at(long long position) {
    long long v = sequence_.at(position);
    ++query_count_;
    return v;
  }

  long long n() const { return sequence_.n(); }
  long long query_count() const { return query_count_; }

  // Unmetered view for instance-generator bookkeeping (not tester-visible).
  const IntSequence& raw() const { return sequence_; }

 private:
  const IntSequence& sequence_;
  long long query_count_ = 0;
};

}  // namespace proptest
