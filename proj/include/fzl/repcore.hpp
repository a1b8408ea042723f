#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "fzl/arith.hpp"
#include "fzl/partition.hpp"

namespace fzl {

/**
 * A partial flag variety Fl(k_1 < ... < k_r, n) of subspaces of an
 * n-dimensional space.  Projective space is Fl(1, n); a Grassmannian is
 * Fl(k, n).  Tautological subquotients R_1, ..., R_{r+1} have ranks
 * d_b = k_b - k_{b-1} with k_0 = 0 and k_{r+1} = n.
 */
struct FlagShape {
  std::vector<long> steps;
  long n = 0;

  FlagShape() = default;
  FlagShape(std::vector<long> s, long nn) : steps(std::move(s)), n(nn) {
    if (steps.empty()) throw std::invalid_argument("flag needs a step");
    long prev = 0;
    for (long k : steps) {
      if (k <= prev) throw std::invalid_argument("flag steps must increase");
      prev = k;
    }
    if (prev >= n) throw std::invalid_argument("flag steps must stay below n");
  }

  long num_blocks() const { return (long)steps.size() + 1; }

  /** Rank of the subquotient R_b, 1-indexed. */
  long block_rank(long b) const {
    long lo = b == 1 ? 0 : steps[b - 2];
    long hi = b == (long)steps.size() + 1 ? n : steps[b - 1];
    return hi - lo;
  }

  std::vector<long> block_ranks() const {
    std::vector<long> d(num_blocks());
    for (long b = 1; b <= num_blocks(); ++b) d[b - 1] = block_rank(b);
    return d;
  }

  long dim() const {
    auto d = block_ranks();
    long s = 0;
    for (size_t a = 0; a < d.size(); ++a)
      for (size_t b = a + 1; b < d.size(); ++b) s += d[a] * d[b];
    return s;
  }

  /** Number of Schubert cells: the multinomial n! / prod d_b!. */
  Int cells() const {
    Int r = factorial(n);
    for (long d : block_ranks()) r /= factorial(d);
    return r;
  }

  bool operator==(const FlagShape& o) const {
    return n == o.n && steps == o.steps;
  }
  bool operator<(const FlagShape& o) const {
    if (n != o.n) return n < o.n;
    return steps < o.steps;
  }
};

inline FlagShape proj_space(long n) { return FlagShape({1}, n + 1); }
inline FlagShape grassmannian(long k, long n) { return FlagShape({k}, n); }

/**
 * Weight of an irreducible homogeneous bundle on one flag factor: the
 * concatenation of one weakly decreasing integer vector per block,
 * total length n.
 */
using BlockWeight = std::vector<std::vector<long>>;

inline void check_block_weight(const FlagShape& fl, const BlockWeight& w) {
  if ((long)w.size() != fl.num_blocks())
    throw std::invalid_argument("weight has wrong number of blocks");
  for (long b = 1; b <= fl.num_blocks(); ++b) {
    if ((long)w[b - 1].size() != fl.block_rank(b))
      throw std::invalid_argument("weight block has wrong length");
    for (size_t i = 0; i + 1 < w[b - 1].size(); ++i)
      if (w[b - 1][i] < w[b - 1][i + 1])
        throw std::invalid_argument("weight block not dominant");
  }
}

inline std::vector<long> flatten_weight(const BlockWeight& w) {
  std::vector<long> out;
  for (auto& blk : w) out.insert(out.end(), blk.begin(), blk.end());
  return out;
}

inline Int block_weight_rank(const FlagShape& fl, const BlockWeight& w) {
  check_block_weight(fl, w);
  Int r = 1;
  for (long b = 1; b <= fl.num_blocks(); ++b) {
    auto blk = w[b - 1];
    long shift = blk.empty() ? 0 : blk.back();
    for (long& x : blk) x -= shift;
    r *= weyl_dim(fl.block_rank(b), blk);
  }
  return r;
}

struct BwbResult {
  bool acyclic = true;
  long degree = -1;
  std::vector<long> weight;  // dominant GL(n) weight of the cohomology
  Int dim = 0;
};

/**
 * Cohomology of the irreducible bundle with the given block weight on one
 * flag factor: either acyclic or concentrated in a single degree, where it
 * is the GL(n) representation of the listed dominant weight.
 */
inline BwbResult bwb(const FlagShape& fl, const BlockWeight& w) {
  check_block_weight(fl, w);
  std::vector<long> v = flatten_weight(w);
  long n = fl.n;
  std::vector<long> rho(n);
  for (long i = 0; i < n; ++i) rho[i] = n - 1 - i;
  std::vector<long> s(n);
  for (long i = 0; i < n; ++i) s[i] = v[i] + rho[i];
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      if (s[i] == s[j]) return {};
  long inv = 0;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      if (s[i] < s[j]) inv++;
  std::sort(s.begin(), s.end(), std::greater<long>());
  std::vector<long> mu(n);
  for (long i = 0; i < n; ++i) mu[i] = s[i] - rho[i];
  BwbResult r;
  r.acyclic = false;
  r.degree = inv;
  r.dim = weyl_dim(n, mu);
  r.weight = std::move(mu);
  return r;
}

/**
 * Line-bundle twists on one factor.  O(t_1, ..., t_r) denotes the tensor
 * product of the t_a-th powers of the Pluecker line bundles det(U_{k_a})^∨.
 * Adding the twist shifts weight block b by sum of t_j over j >= b.
 */
inline std::vector<long> twist_to_shifts(const FlagShape& fl,
                                         const std::vector<long>& t) {
  if ((long)t.size() != (long)fl.steps.size())
    throw std::invalid_argument("twist has wrong number of entries");
  std::vector<long> s(fl.num_blocks(), 0);
  for (long b = 0; b < fl.num_blocks(); ++b)
    for (size_t j = b; j < t.size(); ++j) s[b] += t[j];
  return s;
}

/**
 * Inverse of twist_to_shifts after normalizing the last shift to zero;
 * any shift vector is expressible since the map is unimodular.
 */
inline std::vector<long> shifts_to_twist(const FlagShape& fl,
                                         std::vector<long> s) {
  if ((long)s.size() != fl.num_blocks())
    throw std::invalid_argument("shift vector has wrong length");
  long last = s.back();
  for (long& x : s) x -= last;
  std::vector<long> t(fl.steps.size());
  for (size_t j = 0; j < t.size(); ++j) t[j] = s[j] - s[j + 1];
  return t;
}

inline BlockWeight apply_shifts(const FlagShape& fl, BlockWeight w,
                                const std::vector<long>& s) {
  check_block_weight(fl, w);
  for (long b = 0; b < fl.num_blocks(); ++b)
    for (long& x : w[b]) x += s[b];
  return w;
}

/** Weight of the dual bundle: negate and reverse within each block. */
inline BlockWeight dual_weight(BlockWeight w) {
  for (auto& blk : w) {
    std::reverse(blk.begin(), blk.end());
    for (long& x : blk) x = -x;
  }
  return w;
}

/** Twist coordinates of the anticanonical bundle of the factor. */
inline std::vector<long> anticanonical_twist(const FlagShape& fl) {
  long r = (long)fl.steps.size();
  std::vector<long> t(r);
  for (long a = 1; a <= r; ++a) {
    long lo = a == 1 ? 0 : fl.steps[a - 2];
    long hi = a == r ? fl.n : fl.steps[a];
    t[a - 1] = hi - lo;
  }
  return t;
}

/** Weight of the canonical bundle omega of the factor. */
inline BlockWeight canonical_weight(const FlagShape& fl) {
  BlockWeight w;
  for (long b = 1; b <= fl.num_blocks(); ++b)
    w.emplace_back(fl.block_rank(b), 0);
  auto t = anticanonical_twist(fl);
  for (long& x : t) x = -x;
  return apply_shifts(fl, w, twist_to_shifts(fl, t));
}

}  // namespace fzl
