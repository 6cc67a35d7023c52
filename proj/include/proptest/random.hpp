#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace proptest {

// splitmix64 step; also used as the seed-mixing primitive for counter-based
// per-trial seed derivation (recorded in run manifests).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a;
  std::uint64_t m = splitmix64(s) ^ b;
  return splitmix64(m);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  return mix_seed(master, counter);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t counter) {
  return mix_seed(mix_seed(master, stream), counter);
}

// Deterministic RNG facade. mt19937_64 output is fully specified by the
// standard; the bounded draws below avoid std::uniform_int_distribution,
// whose mapping is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased draw from [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  long long range(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Exact Poisson sampling: Knuth's product method on chunks of the mean,
  // summed; chunking keeps the e^{-chunk} threshold inside double range.
  long long poisson(double mean) {
    long long total = 0;
    while (mean > 0.0) {
      const double chunk = mean > 500.0 ? 500.0 : mean;
      const double threshold = std::exp(-chunk);
      long long k = 0;
      double p = 1.0;
      do {
        ++k;
        p *= unit();
      } while (p > threshold);
      total += k - 1;
      mean -= chunk;
    }
    return total;
  }

  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(xs[i - 1], xs[j]);
    }
  }

  // Random permutation of 1..k.
  std::vector<int> permutation(int k) {
    std::vector<int> p(static_cast<std::size_t>(k));
    std::iota(p.begin(), p.end(), 1);
    shuffle(p);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace proptest
