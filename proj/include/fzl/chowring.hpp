#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fzl/arith.hpp"
#include "fzl/partition.hpp"
#include "fzl/repcore.hpp"

namespace fzl {

/** Sparse exact polynomial: exponent vector over ring variables -> Rat. */
using Mono = std::vector<int>;
using Poly = std::map<Mono, Rat>;

inline long mono_degree(const Mono& m, const std::vector<long>& vdeg) {
  long d = 0;
  for (size_t i = 0; i < m.size(); ++i) d += m[i] * vdeg[i];
  return d;
}

inline void poly_axpy(Poly& a, const Poly& b, const Rat& s) {
  if (s == 0) return;
  for (auto& [m, c] : b) {
    auto [it, fresh] = a.try_emplace(m, 0);
    it->second += s * c;
    if (it->second == 0) a.erase(it);
  }
}

/** Truncated product; monomials above maxdeg are dropped (pass -1 to keep all). */
inline Poly poly_mul(const Poly& a, const Poly& b, const std::vector<long>& vdeg,
                     long maxdeg) {
  Poly out;
  std::vector<std::pair<const Mono*, long>> bdeg;
  bdeg.reserve(b.size());
  for (auto& [mb, cb] : b) bdeg.emplace_back(&mb, mono_degree(mb, vdeg));
  for (auto& [ma, ca] : a) {
    long da = mono_degree(ma, vdeg);
    size_t bi = 0;
    for (auto& [mb, cb] : b) {
      long db = bdeg[bi++].second;
      if (maxdeg >= 0 && da + db > maxdeg) continue;
      Mono m(ma);
      for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
      auto [it, fresh] = out.try_emplace(m, Rat(ca * cb));
      if (!fresh) {
        it->second += ca * cb;
        if (it->second == 0) out.erase(it);
      }
    }
  }
  return out;
}

inline Poly poly_graded(const Poly& p, long m, const std::vector<long>& vdeg) {
  Poly out;
  for (auto& [mono, c] : p)
    if (mono_degree(mono, vdeg) == m) out.emplace(mono, c);
  return out;
}

inline void monomials_of_degree(const std::vector<long>& vdeg, long m,
                                std::vector<Mono>& out) {
  Mono cur(vdeg.size(), 0);
  std::function<void(size_t, long)> rec = [&](size_t i, long rem) {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    if (i == vdeg.size()) return;
    for (long e = rem / vdeg[i]; e >= 0; --e) {
      cur[i] = (int)e;
      rec(i + 1, rem - e * vdeg[i]);
    }
    cur[i] = 0;
  };
  rec(0, m);
}

/** Coefficients of the Gaussian binomial [n over k]_q. */
inline std::vector<Int> gauss_binomial(long n, long k) {
  std::vector<Int> cur{1};
  // iterate [m over k]_q = [m-1 over k-1]_q + q^k [m-1 over k]_q row by row
  std::vector<std::vector<Int>> row(k + 1);
  for (long j = 0; j <= k; ++j) row[j] = {1};
  for (long m = 1; m <= n; ++m) {
    for (long j = std::min(m, k); j >= 1; --j) {
      if (j == m) {
        row[j] = {1};
        continue;
      }
      std::vector<Int> r = row[j - 1];
      r.resize(std::max(r.size(), row[j].size() + j), 0);
      for (size_t t = 0; t < row[j].size(); ++t) r[t + j] += row[j][t];
      row[j] = std::move(r);
    }
  }
  return row[k];
}

/** Number of Schubert classes of each codimension on the flag factor. */
inline std::vector<Int> cell_counts_by_codim(const FlagShape& fl) {
  std::vector<Int> acc{1};
  long rem = fl.n;
  for (long d : fl.block_ranks()) {
    auto g = gauss_binomial(rem, d);
    std::vector<Int> nxt(acc.size() + g.size() - 1, 0);
    for (size_t i = 0; i < acc.size(); ++i)
      for (size_t j = 0; j < g.size(); ++j) nxt[i + j] += acc[i] * g[j];
    acc = std::move(nxt);
    rem -= d;
  }
  acc.resize(fl.dim() + 1, 0);
  return acc;
}

namespace detail {

/** All mu >= lam with mu/lam a vertical strip of size j and at most K rows. */
inline void pieri_vertical(const Partition& lam, long j, long K,
                           std::vector<Partition>& out) {
  if ((long)lam.size() > K) return;
  Partition padded(lam);
  padded.resize(K, 0);
  Partition cur(K, 0);
  std::function<void(long, long)> rec = [&](long row, long rem) {
    if (row == K) {
      if (rem == 0) out.push_back(canon_partition(cur));
      return;
    }
    for (long add = 0; add <= 1 && add <= rem; ++add) {
      long v = padded[row] + add;
      if (row > 0 && v > cur[row - 1]) continue;
      cur[row] = v;
      rec(row + 1, rem - add);
    }
  };
  rec(0, j);
}

}  // namespace detail

/**
 * Exact Chow ring of one flag factor, presented on the Chern classes of
 * the subquotients R_1, ..., R_r; the last block's classes are eliminated
 * through c(U_{k_r}) c(R_{r+1}) = 1, whose tail degrees give the relations.
 * A row-reduced reduction map is built per codimension, and the graded
 * dimensions are checked against the Schubert cell counts.
 */
class ChowFactor {
 public:
  explicit ChowFactor(FlagShape fl) : fl_(std::move(fl)) {
    long r = (long)fl_.steps.size();
    auto ranks = fl_.block_ranks();
    for (long b = 1; b <= r; ++b) {
      block_off_.push_back(nvars_);
      for (long j = 1; j <= ranks[b - 1]; ++j) {
        vdeg_.push_back(j);
        vinfo_.emplace_back(b, j);
        nvars_++;
      }
    }
    build_relations();
    build_reductions();
  }

  const FlagShape& shape() const { return fl_; }
  long nvars() const { return nvars_; }
  const std::vector<long>& var_degrees() const { return vdeg_; }
  long dim() const { return fl_.dim(); }

  /** c_j(R_b) as a local polynomial; the last block is the inverse series. */
  Poly chern(long b, long j) const {
    if (j == 0) return {{Mono(nvars_, 0), 1}};
    if (b < 1 || b > fl_.num_blocks()) throw std::invalid_argument("bad block");
    if (j < 0 || j > fl_.block_rank(b)) return {};
    if (b == fl_.num_blocks()) return last_chern_[j];
    Mono m(nvars_, 0);
    m[block_off_[b - 1] + (j - 1)] = 1;
    return {{m, 1}};
  }

  /** Reduce to the canonical monomial basis, degree by degree. */
  Poly reduce(const Poly& p) const {
    Poly out;
    for (auto& [m, c] : p) {
      long d = mono_degree(m, vdeg_);
      if (d > dim()) continue;
      auto it = pivot_[d].find(m);
      if (it == pivot_[d].end())
        poly_axpy(out, Poly{{m, 1}}, c);
      else
        poly_axpy(out, it->second, c);
    }
    return out;
  }

  /** Degree of the basis in each codimension (equals the cell counts). */
  const std::vector<std::vector<Mono>>& basis() const { return basis_; }

  /** Pushforward to a point of a monomial of top degree. */
  Rat integrate_mono(const Mono& m) const {
    auto it = integral_memo_.find(m);
    if (it != integral_memo_.end()) return it->second;
    std::map<std::pair<Partition, Mono>, Rat> terms;
    // expand the first block into Schur classes of R_1^dual
    long a = fl_.block_rank(1);
    std::vector<std::pair<Partition, Rat>> schur{{Partition{}, 1}};
    long firstlen = (long)(block_off_.size() > 1 ? block_off_[1] : nvars_);
    Mono rest(m.begin() + firstlen, m.end());
    for (long v = 0; v < firstlen; ++v) {
      long j = vdeg_[v];
      for (int rep = 0; rep < m[v]; ++rep) {
        std::vector<std::pair<Partition, Rat>> nxt;
        for (auto& [lam, c] : schur) {
          std::vector<Partition> mus;
          detail::pieri_vertical(lam, j, a, mus);
          Rat s = c;
        if (j % 2 == 1) s = -s;
          for (auto& mu : mus) nxt.emplace_back(mu, s);
        }
        schur = std::move(nxt);
      }
    }
    for (auto& [lam, c] : schur) terms[{lam, rest}] += c;
    Rat val = peel(1, std::move(terms));
    integral_memo_.emplace(m, val);
    return val;
  }

 private:
  FlagShape fl_;
  long nvars_ = 0;
  std::vector<long> vdeg_;
  std::vector<std::pair<long, long>> vinfo_;
  std::vector<long> block_off_;
  std::vector<Poly> last_chern_;
  std::vector<Poly> relations_;
  std::vector<std::map<Mono, Poly>> pivot_;
  std::vector<std::vector<Mono>> basis_;
  mutable std::map<Mono, Rat> integral_memo_;

  Poly one() const { return {{Mono(nvars_, 0), 1}}; }

  void build_relations() {
    long n = fl_.n;
    long r = (long)fl_.steps.size();
    long dlast = fl_.block_rank(r + 1);
    Poly cU = one();
    for (long b = 1; b <= r; ++b) {
      Poly tot = one();
      for (long j = 1; j <= fl_.block_rank(b); ++j)
        poly_axpy(tot, chern(b, j), 1);
      cU = poly_mul(cU, tot, vdeg_, n);
    }
    std::vector<Poly> cu_by_deg(n + 1);
    for (auto& [m, c] : cU) cu_by_deg[mono_degree(m, vdeg_)].emplace(m, c);
    std::vector<Poly> inv(n + 1);
    inv[0] = one();
    for (long j = 1; j <= n; ++j) {
      Poly acc;
      for (long t = 1; t <= std::min(j, fl_.steps[r - 1]); ++t)
        poly_axpy(acc, poly_mul(cu_by_deg[t], inv[j - t], vdeg_, n), -1);
      inv[j] = std::move(acc);
    }
    last_chern_.resize(dlast + 1);
    last_chern_[0] = one();
    for (long j = 1; j <= dlast; ++j) last_chern_[j] = inv[j];
    for (long j = dlast + 1; j <= n; ++j) relations_.push_back(inv[j]);
  }

  void build_reductions() {
    auto cells = cell_counts_by_codim(fl_);
    pivot_.resize(dim() + 1);
    basis_.resize(dim() + 1);
    for (long m = 0; m <= dim(); ++m) {
      std::vector<Mono> monos;
      monomials_of_degree(vdeg_, m, monos);
      std::sort(monos.begin(), monos.end(), std::greater<Mono>());
      std::map<Mono, long> col;
      for (size_t i = 0; i < monos.size(); ++i) col[monos[i]] = (long)i;

      std::vector<std::vector<Rat>> rows;
      for (auto& rel : relations_) {
        if (rel.empty()) continue;
        long dr = mono_degree(rel.begin()->first, vdeg_);
        if (dr > m) continue;
        std::vector<Mono> mults;
        monomials_of_degree(vdeg_, m - dr, mults);
        for (auto& mu : mults) {
          Poly row = poly_mul(Poly{{mu, 1}}, rel, vdeg_, m);
          std::vector<Rat> dense(monos.size(), 0);
          for (auto& [mono, c] : row) dense[col[mono]] = c;
          rows.push_back(std::move(dense));
        }
      }
      // row-reduce to echelon form with fully eliminated pivots
      size_t lead = 0;
      std::vector<long> pivcol;
      for (size_t c = 0; c < monos.size() && lead < rows.size(); ++c) {
        size_t sel = lead;
        while (sel < rows.size() && rows[sel][c] == 0) sel++;
        if (sel == rows.size()) continue;
        std::swap(rows[lead], rows[sel]);
        Rat inv = Rat(1) / rows[lead][c];
        for (auto& x : rows[lead]) x *= inv;
        for (size_t rr = 0; rr < rows.size(); ++rr) {
          if (rr == lead || rows[rr][c] == 0) continue;
          Rat f = rows[rr][c];
          for (size_t t = c; t < monos.size(); ++t)
            rows[rr][t] -= f * rows[lead][t];
        }
        pivcol.push_back((long)c);
        lead++;
      }
      std::vector<bool> ispiv(monos.size(), false);
      for (size_t r = 0; r < pivcol.size(); ++r) {
        ispiv[pivcol[r]] = true;
        Poly rest;
        for (size_t t = pivcol[r] + 1; t < monos.size(); ++t)
          if (rows[r][t] != 0) rest.emplace(monos[t], Rat(-rows[r][t]));
        pivot_[m].emplace(monos[pivcol[r]], std::move(rest));
      }
      for (size_t c = 0; c < monos.size(); ++c)
        if (!ispiv[c]) basis_[m].push_back(monos[c]);
      if ((Int)(long)basis_[m].size() != cells[m])
        throw std::logic_error(
            "internal-consistency error (bug trap): graded dimension of " +
            std::to_string(m) + " differs from the Schubert cell count");
    }
  }

  /**
   * Iterated pushforward.  At stage t the space is Fl(k_t, ..., k_r; n),
   * a term is s_lambda(U_{k_t}^dual) times a monomial in the Chern
   * variables of blocks t+1, ..., r, and one stage integrates over the
   * fibers Gr(k_t, U_{k_{t+1}}).
   */
  Rat peel(long t, std::map<std::pair<Partition, Mono>, Rat> terms) const {
    long r = (long)fl_.steps.size();
    if (t == r) {
      long k = fl_.steps[r - 1];
      Partition box(k, fl_.n - k);
      if (box[0] == 0) box.clear();
      Rat total = 0;
      for (auto& [key, c] : terms)
        if (key.first == box) total += c;
      return total;
    }
    long a = fl_.steps[t - 1], e = fl_.steps[t];
    long dnext = e - a;
    // local series ring in c(A) then c(U') for c_j(R_{t+1})
    long snv = a + e;
    std::vector<long> svdeg(snv);
    for (long j = 1; j <= a; ++j) svdeg[j - 1] = j;
    for (long j = 1; j <= e; ++j) svdeg[a + j - 1] = j;
    auto svar = [&](long idx) {
      Mono m(snv, 0);
      m[idx] = 1;
      return Poly{{m, 1}};
    };
    std::vector<Poly> sub(dnext + 1);
    sub[0] = {{Mono(snv, 0), 1}};
    for (long j = 1; j <= dnext; ++j) {
      Poly acc = svar(a + j - 1);
      for (long s = 1; s <= std::min(j, a); ++s)
        poly_axpy(acc, poly_mul(svar(s - 1), sub[j - s], svdeg, -1), -1);
      sub[j] = std::move(acc);
    }

    long restlen = 0;
    for (long b = t + 2; b <= r; ++b) restlen += fl_.block_rank(b);
    std::map<std::pair<Partition, Mono>, Rat> nxt;
    for (auto& [key, coeff] : terms) {
      const Partition& lam = key.first;
      const Mono& mono = key.second;
      Poly expanded{{Mono(snv, 0), 1}};
      for (long j = 1; j <= dnext; ++j)
        for (int rep = 0; rep < mono[j - 1]; ++rep)
          expanded = poly_mul(expanded, sub[j], svdeg, -1);
      Mono rest(mono.end() - restlen, mono.end());
      for (auto& [sm, sc] : expanded) {
        // multiply the c(A) part into lambda, Gysin down, then absorb c(U')
        std::vector<std::pair<Partition, Rat>> cur{{lam, coeff * sc}};
        for (long j = 1; j <= a; ++j)
          for (int rep = 0; rep < sm[j - 1]; ++rep) {
            std::vector<std::pair<Partition, Rat>> step;
            for (auto& [lm, cc] : cur) {
              std::vector<Partition> mus;
              detail::pieri_vertical(lm, j, a, mus);
              Rat s = cc;
              if (j % 2 == 1) s = -s;
              for (auto& mu : mus) step.emplace_back(mu, s);
            }
            cur = std::move(step);
          }
        std::vector<std::pair<Partition, Rat>> pushed;
        for (auto& [lm, cc] : cur) {
          std::vector<long> vec(a);
          for (long i = 0; i < a; ++i)
            vec[i] = (i < (long)lm.size() ? lm[i] : 0) - (e - a);
          auto [sign, nu] = straighten_schur(vec);
          if (sign != 0) pushed.emplace_back(nu, Rat(cc * sign));
        }
        for (long j = 1; j <= e; ++j)
          for (int rep = 0; rep < sm[a + j - 1]; ++rep) {
            std::vector<std::pair<Partition, Rat>> step;
            for (auto& [lm, cc] : pushed) {
              std::vector<Partition> mus;
              detail::pieri_vertical(lm, j, e, mus);
              Rat s = cc;
              if (j % 2 == 1) s = -s;
              for (auto& mu : mus) step.emplace_back(mu, s);
            }
            pushed = std::move(step);
          }
        for (auto& [nu, cc] : pushed) {
          auto [it, fresh] = nxt.try_emplace({nu, rest}, cc);
          if (!fresh) {
            it->second += cc;
            if (it->second == 0) nxt.erase(it);
          }
        }
      }
    }
    return peel(t + 1, std::move(nxt));
  }
};

/**
 * Chow ring of a product of flag factors, with one global variable table.
 * Reduction and integration are delegated factorwise.
 */
class ChowRing {
 public:
  explicit ChowRing(std::vector<FlagShape> factors) {
    for (auto& fl : factors) factors_.emplace_back(std::move(fl));
    for (auto& f : factors_) {
      offset_.push_back(nvars_);
      for (long v = 0; v < f.nvars(); ++v) vdeg_.push_back(f.var_degrees()[v]);
      nvars_ += f.nvars();
      dim_ += f.dim();
    }
  }

  long num_factors() const { return (long)factors_.size(); }
  const ChowFactor& factor(long f) const { return factors_[f]; }
  const FlagShape& shape(long f) const { return factors_[f].shape(); }
  long dim() const { return dim_; }
  long nvars() const { return nvars_; }
  const std::vector<long>& var_degrees() const { return vdeg_; }

  Poly zero() const { return {}; }
  Poly one() const { return {{Mono(nvars_, 0), 1}}; }
  Poly constant(const Rat& c) const {
    return c == 0 ? Poly{} : Poly{{Mono(nvars_, 0), c}};
  }

  /** c_j(R_b) on factor f (0-indexed factor, 1-indexed block). */
  Poly chern(long f, long b, long j) const {
    return from_local(f, factors_[f].chern(b, j));
  }

  /** Total Chern class of R_b on factor f. */
  Poly total_chern(long f, long b) const {
    Poly tot = one();
    for (long j = 1; j <= shape(f).block_rank(b); ++j)
      poly_axpy(tot, chern(f, b, j), 1);
    return tot;
  }

  Poly from_local(long f, const Poly& lp) const {
    Poly out;
    for (auto& [lm, c] : lp) {
      Mono m(nvars_, 0);
      for (long v = 0; v < (long)lm.size(); ++v) m[offset_[f] + v] = lm[v];
      out.emplace(std::move(m), c);
    }
    return out;
  }

  Poly add(const Poly& a, const Poly& b) const {
    Poly out = a;
    poly_axpy(out, b, 1);
    return out;
  }
  Poly sub(const Poly& a, const Poly& b) const {
    Poly out = a;
    poly_axpy(out, b, -1);
    return out;
  }
  Poly scale(const Poly& a, const Rat& s) const {
    Poly out;
    if (s == 0) return out;
    for (auto& [m, c] : a) out.emplace(m, Rat(c * s));
    return out;
  }
  Poly mul(const Poly& a, const Poly& b) const {
    return poly_mul(a, b, vdeg_, dim_);
  }
  Poly pow(Poly a, long e) const {
    Poly r = one();
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  long degree_of(const Mono& m) const { return mono_degree(m, vdeg_); }
  Poly graded(const Poly& p, long m) const { return poly_graded(p, m, vdeg_); }

  /** Multiplicative inverse of 1 + (positive degree terms), truncated. */
  Poly inverse(const Poly& p) const {
    Poly c0 = graded(p, 0);
    if (c0 != one()) throw std::invalid_argument("inverse needs unit leading term");
    Poly tail = sub(p, c0);
    Poly out = one(), power = one();
    for (long k = 1; k <= dim_; ++k) {
      power = mul(power, tail);
      if (power.empty()) break;
      poly_axpy(out, power, (k % 2 == 0) ? 1 : -1);
    }
    return out;
  }

  Poly normal_form(const Poly& p) const {
    Poly out;
    for (auto& [m, c] : p) {
      Poly term = constant(c);
      for (long f = 0; f < num_factors(); ++f) {
        Poly local;
        Mono lm(m.begin() + offset_[f], m.begin() + offset_[f] + factors_[f].nvars());
        local = factors_[f].reduce(Poly{{lm, 1}});
        if (local.empty()) {
          term.clear();
          break;
        }
        term = mul(term, from_local(f, local));
      }
      poly_axpy(out, term, 1);
    }
    return out;
  }

  /** Degree over the whole product; lower-degree classes integrate to 0. */
  Rat integrate(const Poly& p) const {
    Poly top = graded(normal_form(p), dim_);
    Rat total = 0;
    for (auto& [m, c] : top) {
      Rat v = c;
      for (long f = 0; f < num_factors(); ++f) {
        Mono lm(m.begin() + offset_[f], m.begin() + offset_[f] + factors_[f].nvars());
        v *= factors_[f].integrate_mono(lm);
        if (v == 0) break;
      }
      total += v;
    }
    return total;
  }

  Int cells() const {
    Int c = 1;
    for (auto& f : factors_) c *= f.shape().cells();
    return c;
  }

  std::string mono_str(const Mono& m) const {
    std::ostringstream os;
    bool any = false;
    for (long v = 0; v < nvars_; ++v)
      if (m[v]) {
        long f = 0;
        while (f + 1 < num_factors() && offset_[f + 1] <= v) f++;
        os << (any ? "*" : "") << "c" << (v - offset_[f] + 1) << "[" << f << "]";
        if (m[v] > 1) os << "^" << m[v];
        any = true;
      }
    if (!any) os << "1";
    return os.str();
  }

  std::string poly_str(const Poly& p) const {
    if (p.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : p) {
      os << (first ? "" : " + ") << c.str() << "*" << mono_str(m);
      first = false;
    }
    return os.str();
  }

 private:
  std::vector<ChowFactor> factors_;
  std::vector<long> offset_;
  std::vector<long> vdeg_;
  long nvars_ = 0;
  long dim_ = 0;
};

}  // namespace fzl
