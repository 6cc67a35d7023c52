#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "proptest/errors.hpp"

namespace proptest {

// All distribution math runs on exact rationals; floating point appears only
// in empirical experiment statistics.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;  // exact at every step
  }
  return result;
}

inline BigInt ipow(BigInt base, int exp) {
  BigInt result = 1;
  while (exp > 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

inline BigInt pow2(int exp) { return ipow(BigInt(2), exp); }

// Canonical "num/den" rendering (cpp_rational keeps den > 0 and gcd = 1).
inline std::string to_fraction_string(const Rational& r) {
  return num(r).str() + "/" + den(r).str();
}

inline long long to_ll(const BigInt& v) { return v.convert_to<long long>(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace proptest
