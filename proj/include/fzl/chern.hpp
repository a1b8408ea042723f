#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "fzl/arith.hpp"
#include "fzl/chowring.hpp"
#include "fzl/partition.hpp"
#include "fzl/repcore.hpp"

namespace fzl {

/** A class split by codimension; entry m is the degree-m part. */
using GradedClass = std::vector<Poly>;

/** Per-factor block weights of one irreducible bundle on a product. */
using IrredWeights = std::vector<BlockWeight>;

/**
 * Chern characters, Chern classes and Todd classes over a fixed ChowRing,
 * kept entirely in Chern-class coordinates through Newton identities and
 * Adams operations.
 */
class ChernCalc {
 public:
  explicit ChernCalc(const ChowRing& R) : R_(R) {}

  const ChowRing& ring() const { return R_; }
  long dim() const { return R_.dim(); }

  GradedClass gc_zero() const { return GradedClass(dim() + 1); }
  GradedClass gc_unit(const Rat& r) const {
    auto g = gc_zero();
    g[0] = R_.constant(r);
    return g;
  }
  GradedClass gc_add(const GradedClass& a, const GradedClass& b) const {
    auto g = a;
    for (long m = 0; m <= dim(); ++m) poly_axpy(g[m], b[m], 1);
    return g;
  }
  GradedClass gc_sub(const GradedClass& a, const GradedClass& b) const {
    auto g = a;
    for (long m = 0; m <= dim(); ++m) poly_axpy(g[m], b[m], -1);
    return g;
  }
  GradedClass gc_scale(const GradedClass& a, const Rat& s) const {
    auto g = gc_zero();
    for (long m = 0; m <= dim(); ++m) g[m] = R_.scale(a[m], s);
    return g;
  }
  GradedClass gc_mul(const GradedClass& a, const GradedClass& b) const {
    auto g = gc_zero();
    for (long i = 0; i <= dim(); ++i) {
      if (a[i].empty()) continue;
      for (long j = 0; i + j <= dim(); ++j) {
        if (b[j].empty()) continue;
        poly_axpy(g[i + j], R_.mul(a[i], b[j]), 1);
      }
    }
    return g;
  }
  Rat gc_rank(const GradedClass& a) const {
    if (a[0].empty()) return 0;
    return a[0].begin()->second;
  }
  Poly gc_collapse(const GradedClass& a) const {
    Poly p;
    for (auto& part : a) poly_axpy(p, part, 1);
    return p;
  }
  GradedClass gc_split(const Poly& p) const {
    auto g = gc_zero();
    for (auto& [m, c] : p) g[R_.degree_of(m)].emplace(m, c);
    return g;
  }

  /** Adams operation: scales the degree-m part by d^m. */
  GradedClass adams(const GradedClass& a, long d) const {
    auto g = gc_zero();
    Rat f = 1;
    for (long m = 0; m <= dim(); ++m) {
      g[m] = R_.scale(a[m], f);
      f *= d;
    }
    return g;
  }

  /** ch of the dual: flip the sign of the odd-degree parts. */
  GradedClass gc_dual(const GradedClass& a) const {
    auto g = a;
    for (long m = 1; m <= dim(); m += 2) g[m] = R_.scale(g[m], -1);
    return g;
  }

  /** ch of the k-th exterior power, through the Adams recursion. */
  GradedClass wedge_ch(long k, const GradedClass& a) const {
    std::vector<GradedClass> e{gc_unit(1)};
    for (long j = 1; j <= k; ++j) {
      auto acc = gc_zero();
      for (long d = 1; d <= j; ++d) {
        auto t = gc_mul(adams(a, d), e[j - d]);
        acc = d % 2 == 1 ? gc_add(acc, t) : gc_sub(acc, t);
      }
      e.push_back(gc_scale(acc, Rat(1, j)));
    }
    return e[k];
  }

  /** ch of the k-th symmetric power. */
  GradedClass sym_ch(long k, const GradedClass& a) const {
    std::vector<GradedClass> h{gc_unit(1)};
    for (long j = 1; j <= k; ++j) {
      auto acc = gc_zero();
      for (long d = 1; d <= j; ++d) acc = gc_add(acc, gc_mul(adams(a, d), h[j - d]));
      h.push_back(gc_scale(acc, Rat(1, j)));
    }
    return h[k];
  }

  /** ch of the tautological subquotient R_b on factor f. */
  const GradedClass& ch_block(long f, long b) const {
    auto key = std::make_pair(f, b);
    auto it = block_cache_.find(key);
    if (it != block_cache_.end()) return it->second;
    long d = R_.shape(f).block_rank(b);
    // Newton: p_m = sum_{i<m} (-1)^{i-1} e_i p_{m-i} + (-1)^{m-1} m e_m
    std::vector<Poly> e(dim() + 1), p(dim() + 1);
    for (long j = 0; j <= dim(); ++j) e[j] = R_.chern(f, b, j);
    auto g = gc_zero();
    g[0] = R_.constant(d);
    Rat fact = 1;
    for (long m = 1; m <= dim(); ++m) {
      Poly acc;
      for (long i = 1; i < m; ++i)
        poly_axpy(acc, R_.mul(e[i], p[m - i]), (i % 2 == 1) ? 1 : -1);
      poly_axpy(acc, e[m], (m % 2 == 1) ? Rat(m) : Rat(-m));
      p[m] = std::move(acc);
      fact *= m;
      g[m] = R_.scale(p[m], Rat(1) / fact);
    }
    return block_cache_.emplace(key, std::move(g)).first->second;
  }

  /**
   * ch of the irreducible with the given weight on one block, realized as
   * det(R_b^dual)^c tensor the Schur functor of the reduced partition
   * applied to R_b^dual.
   */
  GradedClass ch_block_weight(long f, long b, std::vector<long> blk) const {
    long d = R_.shape(f).block_rank(b);
    if ((long)blk.size() != d)
      throw std::invalid_argument("weight block has wrong length");
    long c = blk.back();
    Partition mu(d);
    for (long i = 0; i < d; ++i) mu[i] = blk[i] - c;
    mu = canon_partition(mu);
    GradedClass dualch = gc_dual(ch_block(f, b));
    long L = (long)mu.size();
    std::vector<GradedClass> h{gc_unit(1)};
    long hmax = L == 0 ? 0 : mu[0] + L;
    for (long j = 1; j <= hmax; ++j) {
      auto acc = gc_zero();
      for (long t = 1; t <= j; ++t)
        acc = gc_add(acc, gc_mul(adams(dualch, t), h[j - t]));
      h.push_back(gc_scale(acc, Rat(1, j)));
    }
    // Jacobi-Trudi determinant det(h_{mu_i - i + j}) by Laplace expansion
    std::function<GradedClass(std::vector<long>)> det =
        [&](std::vector<long> rows) -> GradedClass {
      if (rows.empty()) return gc_unit(1);
      long col = L - (long)rows.size() + 1;
      auto acc = gc_zero();
      for (size_t t = 0; t < rows.size(); ++t) {
        long idx = mu[rows[t] - 1] - rows[t] + col;
        if (idx < 0) continue;
        std::vector<long> rem;
        for (size_t u = 0; u < rows.size(); ++u)
          if (u != t) rem.push_back(rows[u]);
        auto term = gc_mul(h[idx], det(rem));
        acc = t % 2 == 0 ? gc_add(acc, term) : gc_sub(acc, term);
      }
      return acc;
    };
    std::vector<long> rows(L);
    for (long i = 0; i < L; ++i) rows[i] = i + 1;
    GradedClass schur = det(rows);
    if (c != 0) {
      // twist by det(R_b^dual)^c
      auto arg = gc_zero();
      arg[1] = R_.scale(R_.chern(f, b, 1), -c);
      schur = gc_mul(schur, gc_exp(arg));
    }
    return schur;
  }

  /** ch of a full irreducible bundle on the product. */
  const GradedClass& ch_irred(const IrredWeights& w) const {
    auto it = irred_cache_.find(w);
    if (it != irred_cache_.end()) return it->second;
    if ((long)w.size() != R_.num_factors())
      throw std::invalid_argument("one block weight per factor is required");
    GradedClass g = gc_unit(1);
    for (long f = 0; f < R_.num_factors(); ++f) {
      check_block_weight(R_.shape(f), w[f]);
      for (long b = 1; b <= R_.shape(f).num_blocks(); ++b)
        g = gc_mul(g, ch_block_weight(f, b, w[f][b - 1]));
    }
    return irred_cache_.emplace(w, std::move(g)).first->second;
  }

  /** exp of a class with zero constant term. */
  GradedClass gc_exp(const GradedClass& a) const {
    if (!a[0].empty()) throw std::invalid_argument("exp needs positive degree");
    auto out = gc_unit(1);
    auto power = gc_unit(1);
    Rat fact = 1;
    for (long j = 1; j <= dim(); ++j) {
      power = gc_mul(power, a);
      fact *= j;
      bool all = true;
      for (auto& part : power)
        if (!part.empty()) all = false;
      if (all) break;
      out = gc_add(out, gc_scale(power, Rat(1) / fact));
    }
    return out;
  }

  /** log of the Todd class of a (virtual) bundle given by its ch. */
  GradedClass log_todd(const GradedClass& ch) const {
    static const std::vector<Rat> bern = {
        Rat(1, 6),        Rat(-1, 30),  Rat(1, 42),  Rat(-1, 30), Rat(5, 66),
        Rat(-691, 2730),  Rat(7, 6),    Rat(-3617, 510), Rat(43867, 798)};
    auto out = gc_zero();
    Rat fact = 1;
    std::vector<Rat> factorials{1};
    for (long m = 1; m <= dim(); ++m) {
      fact *= m;
      factorials.push_back(fact);
    }
    out[1] = R_.scale(ch[1], Rat(1, 2));
    for (long k = 1; 2 * k <= dim(); ++k) {
      if (k > (long)bern.size())
        throw std::logic_error("Bernoulli table too short for this dimension");
      Rat coeff = -bern[k - 1] / (Rat(2 * k) * factorials[2 * k]);
      // p_{2k} = (2k)! ch_{2k}
      out[2 * k] = R_.scale(ch[2 * k], coeff * factorials[2 * k]);
    }
    return out;
  }

  GradedClass todd(const GradedClass& ch) const { return gc_exp(log_todd(ch)); }

  /** ch of the tangent bundle of the ambient product. */
  const GradedClass& tangent_ch() const {
    if (!tangent_.empty()) return tangent_;
    GradedClass g = gc_zero();
    for (long f = 0; f < R_.num_factors(); ++f) {
      long nb = R_.shape(f).num_blocks();
      for (long a = 1; a <= nb; ++a)
        for (long b = a + 1; b <= nb; ++b)
          g = gc_add(g, gc_mul(gc_dual(ch_block(f, a)), ch_block(f, b)));
    }
    tangent_ = std::move(g);
    return tangent_;
  }

  const GradedClass& todd_tangent() const {
    if (todd_tangent_.empty()) return todd_tangent_ = todd(tangent_ch());
    return todd_tangent_;
  }

  /** Chern classes c_0..c_k recovered from a Chern character. */
  std::vector<Poly> chern_from_ch(const GradedClass& ch, long k) const {
    k = std::min(k, dim());
    std::vector<Poly> p(k + 1), e(k + 1);
    Rat fact = 1;
    e[0] = R_.one();
    for (long m = 1; m <= k; ++m) {
      fact *= m;
      p[m] = R_.scale(ch[m], fact);
    }
    for (long m = 1; m <= k; ++m) {
      Poly acc;
      for (long d = 1; d <= m; ++d)
        poly_axpy(acc, R_.mul(p[d], e[m - d]), (d % 2 == 1) ? 1 : -1);
      e[m] = R_.scale(acc, Rat(1, m));
    }
    return e;
  }

  /** Euler characteristic on the ambient product by Riemann-Roch. */
  Rat chi_ambient(const GradedClass& chE) const {
    return R_.integrate(gc_collapse(gc_mul(chE, todd_tangent())));
  }

 private:
  const ChowRing& R_;
  mutable std::map<std::pair<long, long>, GradedClass> block_cache_;
  mutable std::map<IrredWeights, GradedClass> irred_cache_;
  mutable GradedClass tangent_;
  mutable GradedClass todd_tangent_;
};

}  // namespace fzl
