#pragma once

#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "proptest/errors.hpp"
#include "proptest/random.hpp"
#include "proptest/rational.hpp"
#include "proptest/sequence.hpp"

namespace proptest {

// Exact distribution of a frequency variable over {1..k}.
struct FrequencyDistribution {
  int k = 0;
  std::vector<Rational> probs;  // probs[i-1] = Pr[X = i]

  const Rational& p(int i) const { return probs[static_cast<std::size_t>(i - 1)]; }
  Rational& p(int i) { return probs[static_cast<std::size_t>(i - 1)]; }
};

inline void validate_distribution(const FrequencyDistribution& dist) {
  if (dist.k < 1 || static_cast<int>(dist.probs.size()) != dist.k)
    throw InvalidParameter("distribution has wrong support size");
  Rational sum = 0;
  for (const Rational& p : dist.probs) {
    if (p < 0) throw InvalidParameter("negative probability");
    sum += p;
  }
  if (sum != 1) throw InvalidParameter("probabilities sum to " + to_fraction_string(sum));
}

inline FrequencyDistribution frequency_distribution(const IntSequence& s) {
  if (s.n() == 0) throw EmptySequence("frequency variable of an empty sequence");
  Histogram h = histogram(s);
  long long distinct = h.distinct_values();
  FrequencyDistribution dist;
  dist.k = s.cap;
  dist.probs.assign(static_cast<std::size_t>(s.cap), Rational(0));
  for (const auto& [freq, cnt] : h.counts)
    dist.probs[static_cast<std::size_t>(freq - 1)] = Rational(cnt, distinct);
  return dist;
}

// Vandermonde rows (i^j) against the alternating binomial vector
// ((-1)^i * C(k,i)) must give (-1, 0, ..., 0); exact integers throughout.
inline bool alternating_binomial_identity_check(int k) {
  if (k < 2) throw InvalidParameter("identity requires k >= 2");
  for (int j = 0; j <= k - 1; ++j) {
    BigInt row = 0;
    for (int i = 1; i <= k; ++i) {
      BigInt term = ipow(BigInt(i), j) * binomial(k, i);
      row += (i % 2 == 0) ? term : -term;
    }
    if (row != (j == 0 ? BigInt(-1) : BigInt(0))) return false;
  }
  return true;
}

// Binomial mass on odd frequencies, normalized by 2^{k-1}.
inline FrequencyDistribution odd_binomial_distribution(int k) {
  FrequencyDistribution dist;
  dist.k = k;
  dist.probs.assign(static_cast<std::size_t>(k), Rational(0));
  for (int i = 1; i <= k; i += 2) dist.p(i) = Rational(binomial(k, i), pow2(k - 1));
  return dist;
}

// Binomial mass on even frequencies, normalized by 2^{k-1}-1.
inline FrequencyDistribution even_binomial_distribution(int k) {
  FrequencyDistribution dist;
  dist.k = k;
  dist.probs.assign(static_cast<std::size_t>(k), Rational(0));
  for (int i = 2; i <= k; i += 2) dist.p(i) = Rational(binomial(k, i), pow2(k - 1) - 1);
  return dist;
}

// The property-satisfying family's frequency distribution: mass on odd
// frequencies for even k, on even frequencies for odd k (so p_k = 0).
inline FrequencyDistribution make_p(int k) {
  if (k < 2) throw InvalidParameter("k must be >= 2");
  return k % 2 == 0 ? odd_binomial_distribution(k) : even_binomial_distribution(k);
}

// The far family's frequency distribution; q_k >= 1/2^k.
inline FrequencyDistribution make_q(int k) {
  if (k < 2) throw InvalidParameter("k must be >= 2");
  return k % 2 == 0 ? even_binomial_distribution(k) : odd_binomial_distribution(k);
}

// The common moment ratio rho (the paper's proportionality constant; renamed
// to avoid clashing with the degree bound d).
inline Rational proportionality_factor(int k) {
  if (k < 2) throw InvalidParameter("k must be >= 2");
  if (k % 2 == 0) return 1 + Rational(1, pow2(k - 1) - 1);
  return 1 - Rational(1, pow2(k - 1));
}

// Componentwise: q_i = rho * p_i + (rho - 1) * (-1)^i * C(k,i).
inline bool check_pq_linear_relation(int k) {
  FrequencyDistribution p = make_p(k);
  FrequencyDistribution q = make_q(k);
  Rational rho = proportionality_factor(k);
  for (int i = 1; i <= k; ++i) {
    Rational alternating = Rational(binomial(k, i)) * (i % 2 == 0 ? 1 : -1);
    if (q.p(i) != rho * p.p(i) + (rho - 1) * alternating) return false;
  }
  return true;
}

inline Rational moment(const FrequencyDistribution& dist, int j) {
  if (j < 0 || j > 64) throw InvalidParameter("moment order out of range [0,64]");
  Rational sum = 0;
  for (int i = 1; i <= dist.k; ++i) sum += dist.p(i) * Rational(ipow(BigInt(i), j));
  return sum;
}

struct ProportionalityWitness {
  int k = 0;
  Rational rho;                         // common ratio, taken from the first moment
  std::vector<Rational> moment_ratios;  // E[X_q^j] / E[X_p^j] for j = 1..k-1
  bool valid = false;                   // all ratios equal
};

inline ProportionalityWitness verify_proportional_moments(const FrequencyDistribution& p,
                                                          const FrequencyDistribution& q,
                                                          int k) {
  ProportionalityWitness witness;
  witness.k = k;
  for (int j = 1; j <= k - 1; ++j) {
    Rational mp = moment(p, j);
    if (mp == 0) throw ZeroMoment("moment " + std::to_string(j) + " of p is zero");
    witness.moment_ratios.push_back(moment(q, j) / mp);
  }
  witness.valid = !witness.moment_ratios.empty();
  if (!witness.moment_ratios.empty()) {
    witness.rho = witness.moment_ratios.front();
    for (const Rational& r : witness.moment_ratios)
      if (r != witness.rho) witness.valid = false;
  }
  return witness;
}

// Realizable lengths are exactly the positive multiples of this step: the
// number of distinct values l must make every l*p_i integral (l a multiple of
// the lcm of denominators) and n = l * E[X].
inline long long realizable_step(const FrequencyDistribution& dist) {
  validate_distribution(dist);
  BigInt l_step = 1;
  for (const Rational& p : dist.probs) l_step = boost::multiprecision::lcm(l_step, den(p));
  Rational n_step = Rational(l_step) * moment(dist, 1);
  return to_ll(num(n_step));  // den is 1 by construction of l_step
}

inline bool is_realizable(const FrequencyDistribution& dist, long long n) {
  return n > 0 && n % realizable_step(dist) == 0;
}

// A sequence of length n realizing dist exactly: value identities 1,2,3,...
// with l*p_i of them occurring i times, positions shuffled by the seed.
inline IntSequence build_sequence_from_distribution(const FrequencyDistribution& dist,
                                                    long long n, std::uint64_t seed) {
  long long step = realizable_step(dist);
  if (n <= 0 || n % step != 0) {
    long long below = (n / step) * step;
    long long above = below + step;
    if (below <= 0) below = step;
    throw Unrealizable(n, below, above);
  }
  Rational l_exact = Rational(n) / moment(dist, 1);
  long long l = to_ll(num(l_exact));
  std::vector<long long> values;
  values.reserve(static_cast<std::size_t>(n));
  long long next_value = 1;
  for (int i = 1; i <= dist.k; ++i) {
    long long count_i = to_ll(num(Rational(l) * dist.p(i)));
    for (long long c = 0; c < count_i; ++c, ++next_value)
      for (int rep = 0; rep < i; ++rep) values.push_back(next_value);
  }
  Rng rng(seed);
  rng.shuffle(values);
  return make_sequence(std::move(values), dist.k);
}

// Distribution report: "k" then k lines "i num/den".
inline void write_distribution_report(std::ostream& os,
                                      const FrequencyDistribution& dist) {
  os << dist.k << '\n';
  for (int i = 1; i <= dist.k; ++i)
    os << i << ' ' << to_fraction_string(dist.p(i)) << '\n';
}

}  // namespace proptest
