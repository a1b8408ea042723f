#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fzl/arith.hpp"

namespace fzl {

/** Weakly decreasing, nonnegative, no trailing zeros. */
using Partition = std::vector<long>;

inline Partition canon_partition(Partition p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  for (size_t i = 1; i < p.size(); ++i)
    if (p[i - 1] < p[i]) throw std::invalid_argument("not a partition");
  if (!p.empty() && p.back() < 0) throw std::invalid_argument("not a partition");
  return p;
}

inline long part_weight(const Partition& p) {
  long w = 0;
  for (long x : p) w += x;
  return w;
}

inline Partition conjugate(const Partition& p) {
  if (p.empty()) return {};
  Partition q(p[0], 0);
  for (long x : p)
    for (long j = 0; j < x; ++j) q[j]++;
  return q;
}

inline bool fits_box(const Partition& p, long rows, long cols) {
  return (long)p.size() <= rows && (p.empty() || p[0] <= cols);
}

inline void partitions_of(long k, long maxLen, long maxPart,
                          std::vector<Partition>& out) {
  Partition cur;
  std::function<void(long, long)> rec = [&](long rem, long cap) {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    if ((long)cur.size() == maxLen) return;
    for (long x = std::min(rem, cap); x >= 1; --x) {
      cur.push_back(x);
      rec(rem - x, x);
      cur.pop_back();
    }
  };
  rec(k, std::min(k, maxPart));
}

/** All partitions mu contained in lam, the empty partition included. */
inline std::vector<Partition> subpartitions(const Partition& lam) {
  std::vector<Partition> out;
  Partition acc;
  std::function<void(size_t, long)> rec = [&](size_t row, long prev) {
    if (row == lam.size()) {
      out.push_back(canon_partition(acc));
      return;
    }
    for (long v = std::min(lam[row], prev); v >= 0; --v) {
      acc.push_back(v);
      rec(row + 1, v);
      acc.pop_back();
    }
  };
  rec(0, lam.empty() ? 0 : lam[0]);
  return out;
}

/**
 * Dimension of the GL(n) irreducible with highest weight w (weakly
 * decreasing integers, padded with zeros to length n).
 */
inline Int weyl_dim(long n, std::vector<long> w) {
  if ((long)w.size() > n) {
    for (size_t i = n; i < w.size(); ++i)
      if (w[i] != 0) throw std::invalid_argument("weight longer than rank");
    w.resize(n);
  }
  w.resize(n, 0);
  for (long i = 0; i + 1 < n; ++i)
    if (w[i] < w[i + 1]) throw std::invalid_argument("weight not dominant");
  Int num = 1, den = 1;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j) {
      num *= w[i] - w[j] + j - i;
      den *= j - i;
    }
  return num / den;
}

namespace detail {

// Places the strip of the next label on `prev`, honoring the horizontal
// strip, column-strictness and ballot conditions, then recurses.
inline void lr_rec(const std::vector<Partition>& rowsOfB, size_t label,
                   const Partition& prev, const std::vector<long>& prevCum,
                   long maxRows, std::map<Partition, long>& out) {
  if (label == rowsOfB.size()) {
    Partition nu = prev;
    while (!nu.empty() && nu.back() == 0) nu.pop_back();
    if (maxRows >= 0 && (long)nu.size() > maxRows) return;
    out[nu]++;
    return;
  }
  long m = rowsOfB[label][0];
  long nrows = (long)prev.size() + 1;
  if (maxRows >= 0) nrows = std::min<long>(nrows, maxRows);

  Partition cur(std::max<long>((long)prev.size(), nrows), 0);
  for (size_t i = 0; i < prev.size(); ++i) cur[i] = prev[i];
  std::vector<long> cum(cur.size() + 1, 0);

  std::function<void(long, long)> place = [&](long row, long left) {
    if (row == (long)cur.size()) {
      if (left != 0) return;
      std::vector<long> nextCum(cur.size() + 1, 0);
      for (size_t r = 0; r < cur.size(); ++r)
        nextCum[r + 1] = nextCum[r] + (cur[r] - (r < prev.size() ? prev[r] : 0));
      lr_rec(rowsOfB, label + 1, cur, nextCum, maxRows, out);
      return;
    }
    long base = row < (long)prev.size() ? prev[row] : 0;
    long hi = row == 0 ? base + left : std::min(cur[row - 1], prev[row - 1]);
    // ballot: boxes of this label in rows <= row+1 never exceed the
    // previous label's count in rows <= row
    for (long add = 0; add <= hi - base && add <= left; ++add) {
      long cumHere = cum[row] + add;
      if (!prevCum.empty() &&
          cumHere > (row == 0 ? 0 : prevCum[std::min<size_t>(row, prevCum.size() - 1)]))
        continue;
      cur[row] = base + add;
      cum[row + 1] = cumHere;
      place(row + 1, left - add);
    }
    cur[row] = base;
  };
  place(0, m);
}

}  // namespace detail

/**
 * Littlewood-Richardson expansion of s_a * s_b as a multiset of partitions.
 * Parts longer than maxRows are dropped when maxRows >= 0.
 */
inline std::map<Partition, long> lr_product(const Partition& a,
                                            const Partition& b,
                                            long maxRows = -1) {
  Partition pa = canon_partition(a), pb = canon_partition(b);
  if (maxRows >= 0 && (long)pa.size() > maxRows) return {};
  std::map<Partition, long> out;
  if (pb.empty()) {
    out[pa] = 1;
    return out;
  }
  std::vector<Partition> rowsOfB;
  for (long r : pb) rowsOfB.push_back({r});
  detail::lr_rec(rowsOfB, 0, pa, {}, maxRows, out);
  return out;
}

/** c^nu_{ab} */
inline long lr_coefficient(const Partition& a, const Partition& b,
                           const Partition& nu) {
  auto prod = lr_product(a, b);
  auto it = prod.find(canon_partition(nu));
  return it == prod.end() ? 0 : it->second;
}

/**
 * Tensor product of GL(d) irreducibles with arbitrary dominant weights
 * (entries may be negative); returns weight -> multiplicity.
 */
inline std::map<std::vector<long>, long> gl_tensor(std::vector<long> u,
                                                   std::vector<long> v,
                                                   long d) {
  u.resize(d, 0);
  v.resize(d, 0);
  long su = u.back(), sv = v.back();
  Partition a(d), b(d);
  for (long i = 0; i < d; ++i) {
    a[i] = u[i] - su;
    b[i] = v[i] - sv;
  }
  auto prod = lr_product(canon_partition(a), canon_partition(b), d);
  std::map<std::vector<long>, long> out;
  for (auto& [nu, c] : prod) {
    std::vector<long> w(nu);
    w.resize(d, 0);
    for (long& x : w) x += su + sv;
    out[w] += c;
  }
  return out;
}

/** Pairs (lambda, lambda') in the wedge Cauchy decomposition of ranks a, b. */
inline std::vector<std::pair<Partition, Partition>> cauchy_wedge(long k, long a,
                                                                 long b) {
  std::vector<Partition> ps;
  partitions_of(k, a, b, ps);
  std::vector<std::pair<Partition, Partition>> out;
  for (auto& p : ps) out.emplace_back(p, conjugate(p));
  return out;
}

/** Pairs (lambda, lambda) in the symmetric Cauchy decomposition. */
inline std::vector<std::pair<Partition, Partition>> cauchy_sym(long k, long a,
                                                               long b) {
  std::vector<Partition> ps;
  partitions_of(k, std::min(a, b), k, ps);
  std::vector<std::pair<Partition, Partition>> out;
  for (auto& p : ps) out.emplace_back(p, p);
  return out;
}

/**
 * Straighten an integer Schur index: returns (sign, partition) with
 * s_mu = sign * s_partition, or sign 0 when the determinant vanishes.
 */
inline std::pair<int, Partition> straighten_schur(std::vector<long> mu) {
  long n = (long)mu.size();
  std::vector<long> beta(n);
  for (long i = 0; i < n; ++i) beta[i] = mu[i] - i;
  int sign = 1;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j) {
      if (beta[i] == beta[j]) return {0, {}};
      if (beta[i] < beta[j]) {
        std::swap(beta[i], beta[j]);
        sign = -sign;
      }
    }
  Partition lam(n);
  for (long i = 0; i < n; ++i) {
    lam[i] = beta[i] + i;
    if (lam[i] < 0) return {0, {}};
  }
  return {sign, canon_partition(lam)};
}

}  // namespace fzl
