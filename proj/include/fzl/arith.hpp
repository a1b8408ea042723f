#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace fzl {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/** n over k for arbitrary integer n (polynomial extension), k >= 0. */
inline Int binomial(const Int& n, long k) {
  if (k < 0) return 0;
  Int num = 1;
  for (long i = 0; i < k; ++i) num *= n - i;
  Int den = 1;
  for (long i = 2; i <= k; ++i) den *= i;
  return num / den;
}

inline Int factorial(long n) {
  Int r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Int ipow(Int b, long e) {
  Int r = 1;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline bool is_integer(const Rat& q) { return denominator(q) == 1; }

inline Int rat_to_int(const Rat& q) {
  if (!is_integer(q))
    throw std::runtime_error("expected an integer, got " + q.str());
  return numerator(q);
}

}  // namespace fzl
