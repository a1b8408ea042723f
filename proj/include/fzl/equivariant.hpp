#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "fzl/repcore.hpp"

namespace fzl {

/** Dominant GL(n) weight, full length n, entries may be negative. */
using GlWeight = std::vector<long>;

/** Formal sum of weights with multiplicity. */
using WeightSum = std::map<GlWeight, Int>;

/** One irreducible of a product group, one dominant weight per factor. */
using ProdIrrep = std::vector<GlWeight>;

/** Formal sum of product-group irreducibles. */
using RepSum = std::map<ProdIrrep, Int>;

namespace detail {

/**
 * Enumerate Gelfand-Tsetlin patterns below the row `upper`; wacc carries the
 * weight entries already fixed for the longer rows, outermost first.
 */
inline void gt_rec(const std::vector<long>& upper, std::vector<long>& wacc,
                   WeightSum& out) {
  long k = (long)upper.size();
  if (k == 1) {
    GlWeight w;
    w.push_back(upper[0]);
    for (auto it = wacc.rbegin(); it != wacc.rend(); ++it) w.push_back(*it);
    out[w] += 1;
    return;
  }
  std::vector<long> row(k - 1);
  std::function<void(size_t)> go = [&](size_t pos) {
    if (pos == row.size()) {
      long tu = 0, tr = 0;
      for (long x : upper) tu += x;
      for (long x : row) tr += x;
      wacc.push_back(tu - tr);
      gt_rec(row, wacc, out);
      wacc.pop_back();
      return;
    }
    for (long v = upper[pos + 1]; v <= upper[pos]; ++v) {
      row[pos] = v;
      go(pos + 1);
    }
  };
  go(0);
}

}  // namespace detail

/**
 * Weight multiset of the irreducible GL(n) representation with the given
 * dominant weight, computed by Gelfand-Tsetlin branching.  Entries of mu may
 * be negative; the multiset is exact, not truncated.
 */
inline WeightSum irrep_weights(long n, GlWeight mu) {
  if ((long)mu.size() != n) throw std::invalid_argument("weight length");
  for (size_t i = 0; i + 1 < mu.size(); ++i)
    if (mu[i] < mu[i + 1]) throw std::invalid_argument("weight not dominant");
  static std::map<std::pair<long, GlWeight>, WeightSum> memo;
  static std::mutex mx;
  long shift = mu.empty() ? 0 : mu.back();
  for (long& x : mu) x -= shift;
  WeightSum base;
  {
    std::lock_guard<std::mutex> lk(mx);
    auto it = memo.find({n, mu});
    if (it != memo.end()) base = it->second;
  }
  if (base.empty()) {
    std::vector<long> wacc;
    detail::gt_rec(mu, wacc, base);
    std::lock_guard<std::mutex> lk(mx);
    memo[{n, mu}] = base;
  }
  if (shift == 0) return base;
  WeightSum out;
  for (auto& [w, m] : base) {
    GlWeight v = w;
    for (long& x : v) x += shift;
    out[v] = m;
  }
  return out;
}

inline Int weight_sum_dim(const WeightSum& s) {
  Int d = 0;
  for (auto& [w, m] : s) d += m;
  return d;
}

inline WeightSum weight_sum_mul(const WeightSum& a, const WeightSum& b) {
  WeightSum out;
  for (auto& [wa, ma] : a)
    for (auto& [wb, mb] : b) {
      GlWeight w(wa.size());
      for (size_t i = 0; i < w.size(); ++i) w[i] = wa[i] + wb[i];
      out[w] += ma * mb;
    }
  return out;
}

/**
 * Complete homogeneous functor h_k of a weight multiset: k-element
 * multisets, a c-fold repeat of an m-dimensional weight space counting
 * binomial(m + c - 1, c) ways.
 */
inline WeightSum weight_sum_h(long k, const WeightSum& s) {
  if (s.empty()) throw std::invalid_argument("h of empty alphabet");
  GlWeight zero(s.begin()->first.size(), 0);
  std::vector<WeightSum> dp(k + 1);
  dp[0][zero] = 1;
  for (auto& [w, m] : s) {
    std::vector<WeightSum> nd(k + 1);
    Int coeff = 1;
    GlWeight acc = zero;
    for (long c = 0; c <= k; ++c) {
      if (c > 0) {
        coeff = coeff * (m + c - 1) / c;
        for (size_t i = 0; i < acc.size(); ++i) acc[i] += w[i];
      }
      if (coeff == 0) break;
      for (long rest = 0; rest + c <= k; ++rest)
        for (auto& [pw, pm] : dp[rest]) {
          GlWeight t = pw;
          for (size_t i = 0; i < t.size(); ++i) t[i] += acc[i];
          nd[rest + c][t] += pm * coeff;
        }
    }
    dp = std::move(nd);
  }
  return dp[k];
}

/**
 * Decompose a genuine weight multiset into irreducibles by repeatedly
 * peeling the lexicographically greatest weight, which is a highest weight.
 */
inline std::map<GlWeight, Int> peel_weights(long n, WeightSum s) {
  for (auto it = s.begin(); it != s.end();)
    it = (it->second == 0) ? s.erase(it) : std::next(it);
  std::map<GlWeight, Int> out;
  while (!s.empty()) {
    auto top = std::prev(s.end());
    GlWeight mu = top->first;
    Int m = top->second;
    if (m < 0) throw std::logic_error("weight multiset is not a character");
    for (size_t i = 0; i + 1 < mu.size(); ++i)
      if (mu[i] < mu[i + 1])
        throw std::logic_error("top weight fails to be dominant");
    out[mu] += m;
    for (auto& [w, c] : irrep_weights(n, mu)) {
      s[w] -= c * m;
      if (s[w] == 0) s.erase(w);
    }
  }
  return out;
}

/**
 * Schur functor S^lam applied to the GL(n) irreducible of weight mu,
 * decomposed into irreducibles.  lam is a partition of size at most four,
 * handled through the Jacobi-Trudi determinant in complete homogeneous
 * functors of the weight multiset.
 */
inline std::map<GlWeight, Int> plethysm_schur(const std::vector<long>& lam,
                                              long n, const GlWeight& mu) {
  if (lam.empty()) return {{GlWeight(n, 0), Int(1)}};
  static std::map<std::tuple<std::vector<long>, long, GlWeight>,
                  std::map<GlWeight, Int>>
      memo;
  static std::mutex mx;
  {
    std::lock_guard<std::mutex> lk(mx);
    auto it = memo.find({lam, n, mu});
    if (it != memo.end()) return it->second;
  }
  WeightSum alpha = irrep_weights(n, mu);
  long ell = (long)lam.size();
  long need = 0;
  for (long i = 0; i < ell; ++i) need = std::max(need, lam[i] + ell - 1 - i);
  std::map<long, WeightSum> h;
  for (long k = 0; k <= need; ++k) h[k] = weight_sum_h(k, alpha);
  std::vector<long> perm(ell);
  for (long i = 0; i < ell; ++i) perm[i] = i;
  WeightSum det;
  do {
    long inv = 0;
    for (long i = 0; i < ell; ++i)
      for (long j = i + 1; j < ell; ++j)
        if (perm[i] > perm[j]) inv++;
    WeightSum term;
    bool dead = false;
    for (long i = 0; i < ell; ++i) {
      long k = lam[i] - i + perm[i];
      if (k < 0) {
        dead = true;
        break;
      }
      term = (i == 0) ? h[k] : weight_sum_mul(term, h[k]);
    }
    if (!dead)
      for (auto& [w, m] : term) det[w] += (inv % 2 == 0) ? m : -m;
  } while (std::next_permutation(perm.begin(), perm.end()));
  auto out = peel_weights(n, det);
  std::lock_guard<std::mutex> lk(mx);
  memo[{lam, n, mu}] = out;
  return out;
}

namespace detail {

inline std::vector<std::vector<long>> partitions_of(long a) {
  if (a == 0) return {{}};
  std::vector<std::vector<long>> out;
  std::vector<long> cur;
  std::function<void(long, long)> go = [&](long rest, long maxp) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (long p = std::min(rest, maxp); p >= 1; --p) {
      cur.push_back(p);
      go(rest - p, p);
      cur.pop_back();
    }
  };
  go(a, a);
  return out;
}

/** Character tables of the symmetric groups of degree up to four. */
inline long sym_character(const std::vector<long>& lam,
                          const std::vector<long>& cls) {
  auto is = [](const std::vector<long>& v, std::initializer_list<long> w) {
    return v == std::vector<long>(w);
  };
  long a = 0;
  for (long p : lam) a += p;
  if (a <= 1) return 1;
  if (a == 2) {
    if (is(lam, {2})) return 1;
    return is(cls, {1, 1}) ? 1 : -1;
  }
  if (a == 3) {
    if (is(lam, {3})) return 1;
    if (is(lam, {1, 1, 1}))
      return is(cls, {2, 1}) ? -1 : 1;
    if (is(cls, {1, 1, 1})) return 2;
    if (is(cls, {2, 1})) return 0;
    return -1;
  }
  if (a == 4) {
    long t[5][5] = {
        {1, 1, 1, 1, 1},
        {3, 1, -1, 0, -1},
        {2, 0, 2, -1, 0},
        {3, -1, -1, 0, 1},
        {1, -1, 1, 1, -1},
    };
    long row, col;
    if (is(lam, {4})) row = 0;
    else if (is(lam, {3, 1})) row = 1;
    else if (is(lam, {2, 2})) row = 2;
    else if (is(lam, {2, 1, 1})) row = 3;
    else row = 4;
    if (is(cls, {1, 1, 1, 1})) col = 0;
    else if (is(cls, {2, 1, 1})) col = 1;
    else if (is(cls, {2, 2})) col = 2;
    else if (is(cls, {3, 1})) col = 3;
    else col = 4;
    return t[row][col];
  }
  throw std::invalid_argument("symmetric group table stops at degree four");
}

inline long class_size(const std::vector<long>& cls) {
  long a = 0;
  for (long p : cls) a += p;
  long num = 1;
  for (long k = 2; k <= a; ++k) num *= k;
  long z = 1;
  std::map<long, long> count;
  for (long p : cls) {
    z *= p;
    count[p]++;
  }
  for (auto& [p, c] : count)
    for (long k = 2; k <= c; ++k) z *= k;
  return num / z;
}

}  // namespace detail

/**
 * Multi-factor Kronecker coefficient: multiplicity of the trivial in the
 * tensor product of the listed symmetric group irreducibles, all partitions
 * of the same degree a <= 4.
 */
inline long kronecker(const std::vector<std::vector<long>>& lams) {
  long a = 0;
  for (long p : lams.at(0)) a += p;
  if (a <= 1) return 1;
  long order = 1;
  for (long k = 2; k <= a; ++k) order *= k;
  long total = 0;
  for (auto& cls : detail::partitions_of(a)) {
    long prod = detail::class_size(cls);
    for (auto& lam : lams) prod *= detail::sym_character(lam, cls);
    total += prod;
  }
  if (total % order != 0) throw std::logic_error("kronecker sum not integral");
  return total / order;
}

inline ProdIrrep prod_dual(const ProdIrrep& p) {
  ProdIrrep out(p.size());
  for (size_t f = 0; f < p.size(); ++f) {
    GlWeight w(p[f].rbegin(), p[f].rend());
    for (long& x : w) x = -x;
    out[f] = w;
  }
  return out;
}

inline RepSum rep_dual(const RepSum& s) {
  RepSum out;
  for (auto& [p, m] : s) out[prod_dual(p)] += m;
  return out;
}

inline Int rep_dim(const std::vector<long>& ranks, const RepSum& s) {
  Int d = 0;
  for (auto& [p, m] : s) {
    Int f = m;
    for (size_t i = 0; i < p.size(); ++i) f *= weyl_dim(ranks[i], p[i]);
    d += f;
  }
  return d;
}

/** Tensor product of two product-group irreducibles, factor by factor. */
inline RepSum prod_tensor(const std::vector<long>& ranks, const ProdIrrep& a,
                          const ProdIrrep& b) {
  static std::map<std::tuple<std::vector<long>, ProdIrrep, ProdIrrep>, RepSum>
      memo;
  static std::mutex mx;
  {
    std::lock_guard<std::mutex> lk(mx);
    auto it = memo.find({ranks, a, b});
    if (it != memo.end()) return it->second;
  }
  RepSum acc{{ProdIrrep{}, Int(1)}};
  for (size_t f = 0; f < ranks.size(); ++f) {
    auto part = peel_weights(
        ranks[f], weight_sum_mul(irrep_weights(ranks[f], a[f]),
                                 irrep_weights(ranks[f], b[f])));
    RepSum next;
    for (auto& [pfx, m] : acc)
      for (auto& [w, c] : part) {
        ProdIrrep p = pfx;
        p.push_back(w);
        next[p] += m * c;
      }
    acc = std::move(next);
  }
  std::lock_guard<std::mutex> lk(mx);
  memo[{ranks, a, b}] = acc;
  return acc;
}

inline RepSum rep_tensor(const std::vector<long>& ranks, const RepSum& a,
                         const RepSum& b) {
  RepSum out;
  for (auto& [pa, ma] : a)
    for (auto& [pb, mb] : b)
      for (auto& [p, c] : prod_tensor(ranks, pa, pb)) out[p] += ma * mb * c;
  return out;
}

/**
 * Symmetric power of one product-group irreducible: Schur functors are
 * distributed over the factors with Kronecker multiplicities.
 */
inline RepSum prod_sym_power(const std::vector<long>& ranks, long a,
                             const ProdIrrep& p) {
  if (a == 0) {
    ProdIrrep triv(ranks.size());
    for (size_t f = 0; f < ranks.size(); ++f) triv[f] = GlWeight(ranks[f], 0);
    return RepSum{{triv, Int(1)}};
  }
  auto lams = detail::partitions_of(a);
  RepSum out;
  std::vector<size_t> pick(ranks.size(), 0);
  while (true) {
    std::vector<std::vector<long>> chosen;
    for (size_t f = 0; f < ranks.size(); ++f) chosen.push_back(lams[pick[f]]);
    long g = kronecker(chosen);
    if (g > 0) {
      RepSum acc{{ProdIrrep{}, Int(1)}};
      for (size_t f = 0; f < ranks.size(); ++f) {
        auto part = plethysm_schur(chosen[f], ranks[f], p[f]);
        RepSum next;
        for (auto& [pfx, m] : acc)
          for (auto& [w, c] : part) {
            ProdIrrep q = pfx;
            q.push_back(w);
            next[q] += m * c;
          }
        acc = std::move(next);
      }
      for (auto& [q, m] : acc) out[q] += m * g;
    }
    size_t f = 0;
    while (f < ranks.size() && ++pick[f] == lams.size()) pick[f++] = 0;
    if (f == ranks.size()) break;
  }
  return out;
}

/** Symmetric power of a formal sum of product-group irreducibles. */
inline RepSum rep_sym_power(const std::vector<long>& ranks, long r,
                            const RepSum& w) {
  std::vector<ProdIrrep> items;
  for (auto& [p, m] : w) {
    if (m < 0) throw std::invalid_argument("negative multiplicity");
    for (Int c = 0; c < m; ++c) items.push_back(p);
  }
  std::function<RepSum(long, size_t)> go = [&](long rest,
                                               size_t at) -> RepSum {
    if (at == items.size()) {
      if (rest != 0) return {};
      ProdIrrep triv(ranks.size());
      for (size_t f = 0; f < ranks.size(); ++f) triv[f] = GlWeight(ranks[f], 0);
      return RepSum{{triv, Int(1)}};
    }
    RepSum out;
    for (long a = 0; a <= rest; ++a) {
      RepSum tail = go(rest - a, at + 1);
      if (tail.empty()) continue;
      RepSum head = prod_sym_power(ranks, a, items[at]);
      for (auto& [p, m] : rep_tensor(ranks, head, tail)) out[p] += m;
    }
    return out;
  };
  return go(r, 0);
}

/**
 * Multiplicity of the trivial representation in (Sym^r W)* (x) A* (x) B,
 * the space of equivariant degree-r polynomial families of maps A -> B.
 * Zero certifies that every such family vanishes identically.
 */
inline Int equivariant_map_multiplicity(const std::vector<long>& ranks, long r,
                                        const RepSum& w, const RepSum& a,
                                        const RepSum& b) {
  RepSum ab = rep_tensor(ranks, rep_dual(a), b);
  RepSum sw = rep_sym_power(ranks, r, w);
  Int total = 0;
  for (auto& [p, m] : sw) {
    auto it = ab.find(p);
    if (it != ab.end()) total += m * it->second;
  }
  return total;
}

}  // namespace fzl
