#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fzl/partition.hpp"
#include "fzl/repcore.hpp"

namespace fzl {

/** One irreducible summand on a product of flag factors, one weight each. */
using Irred = std::vector<BlockWeight>;

/** A completely reducible bundle: irreducible summand -> multiplicity. */
using BundleSum = std::map<Irred, Int>;

/** Cohomology of one irreducible summand: zero or a single degree. */
struct IrredCohom {
  bool acyclic = true;
  long degree = -1;
  Int dim = 0;
};

/**
 * Exact calculus of completely reducible homogeneous bundles on a fixed
 * product of flag factors: duals, determinants, tensor products, exterior
 * and symmetric powers and general Schur functors, plus sheaf cohomology
 * via the factorwise Bott recipe.
 *
 * Summand weights are stored per factor modulo the trivial determinant of
 * the ambient space; normal_form fixes the representative.  Schur functor
 * results are memoized behind a shared mutex, so one instance can serve
 * several threads.
 */
class BundleOps {
 public:
  explicit BundleOps(std::vector<FlagShape> shapes)
      : shapes_(std::move(shapes)) {
    if (shapes_.empty())
      throw std::invalid_argument("need at least one factor");
  }

  BundleOps(const BundleOps&) = delete;
  BundleOps& operator=(const BundleOps&) = delete;

  const std::vector<FlagShape>& shapes() const { return shapes_; }
  long num_factors() const { return (long)shapes_.size(); }

  long dim() const {
    long d = 0;
    for (auto& fl : shapes_) d += fl.dim();
    return d;
  }

  void check(const Irred& e) const {
    if ((long)e.size() != num_factors())
      throw std::invalid_argument("summand has wrong number of factors");
    for (long f = 0; f < num_factors(); ++f)
      check_block_weight(shapes_[f], e[f]);
  }

  /**
   * Canonical representative: on each factor the weight is shifted by a
   * constant so that the last entry of the last block is zero.
   */
  Irred normal_form(Irred e) const {
    check(e);
    for (auto& fw : e) {
      long c = fw.back().back();
      if (c == 0) continue;
      for (auto& blk : fw)
        for (long& x : blk) x -= c;
    }
    return e;
  }

  BundleSum normal_sum(const BundleSum& s) const {
    BundleSum out;
    for (auto& [e, m] : s)
      if (m != 0) out[normal_form(e)] += m;
    return out;
  }

  /** The structure sheaf. */
  Irred trivial() const {
    Irred e(num_factors());
    for (long f = 0; f < num_factors(); ++f)
      for (long b = 1; b <= shapes_[f].num_blocks(); ++b)
        e[f].emplace_back(shapes_[f].block_rank(b), 0);
    return e;
  }

  BundleSum unit_sum() const { return BundleSum{{trivial(), Int(1)}}; }
  BundleSum single(const Irred& e) const {
    return BundleSum{{normal_form(e), Int(1)}};
  }

  /** The line bundle O(t) for one twist vector per factor. */
  Irred line(const std::vector<std::vector<long>>& twists) const {
    return twist(trivial(), twists);
  }

  Irred twist(Irred e, const std::vector<std::vector<long>>& twists) const {
    check(e);
    if ((long)twists.size() != num_factors())
      throw std::invalid_argument("twist needs one vector per factor");
    for (long f = 0; f < num_factors(); ++f)
      e[f] = apply_shifts(shapes_[f], e[f],
                          twist_to_shifts(shapes_[f], twists[f]));
    return e;
  }

  /** Twist coordinates of a line bundle; rejects higher-rank input. */
  std::vector<std::vector<long>> line_twists(const Irred& e) const {
    check(e);
    std::vector<std::vector<long>> out;
    for (long f = 0; f < num_factors(); ++f) {
      std::vector<long> s;
      for (auto& blk : e[f]) {
        for (long x : blk)
          if (x != blk[0])
            throw std::invalid_argument("bundle is not a line bundle");
        s.push_back(blk[0]);
      }
      out.push_back(shifts_to_twist(shapes_[f], s));
    }
    return out;
  }

  /** The dual tautological subquotient R_b^v on factor f (1-indexed b). */
  Irred r_dual(long f, long b) const {
    Irred e = trivial();
    e[f][b - 1][0] = 1;
    return e;
  }

  /** The tautological subquotient R_b on factor f. */
  Irred r_bundle(long f, long b) const {
    Irred e = trivial();
    e[f][b - 1].back() = -1;
    return e;
  }

  /** S_lam(R_b^v) on factor f. */
  Irred schur_r_dual(long f, long b, const Partition& lam) const {
    Partition p = canon_partition(lam);
    Irred e = trivial();
    if ((long)p.size() > shapes_[f].block_rank(b))
      throw std::invalid_argument("partition is longer than the block rank");
    std::copy(p.begin(), p.end(), e[f][b - 1].begin());
    return e;
  }

  Irred canonical_line() const {
    Irred e;
    for (auto& fl : shapes_) e.push_back(canonical_weight(fl));
    return e;
  }

  Irred anticanonical_line() const { return dual(canonical_line()); }

  Int rank(const Irred& e) const {
    check(e);
    Int r = 1;
    for (long f = 0; f < num_factors(); ++f)
      r *= block_weight_rank(shapes_[f], e[f]);
    return r;
  }

  Int rank(const BundleSum& s) const {
    Int r = 0;
    for (auto& [e, m] : s) r += m * rank(e);
    return r;
  }

  Irred dual(const Irred& e) const {
    check(e);
    Irred out;
    for (auto& fw : e) out.push_back(dual_weight(fw));
    return out;
  }

  BundleSum dual(const BundleSum& s) const {
    BundleSum out;
    for (auto& [e, m] : s) out[normal_form(dual(e))] += m;
    return out;
  }

  /** Determinant line bundle of one summand. */
  Irred det(const Irred& e) const {
    Int r = rank(e);
    Irred out = trivial();
    for (long f = 0; f < num_factors(); ++f)
      for (long b = 1; b <= shapes_[f].num_blocks(); ++b) {
        long d = shapes_[f].block_rank(b);
        Int tot = 0;
        for (long x : e[f][b - 1]) tot += x;
        Int num = tot * r;
        if (num % d != 0)
          throw std::logic_error(
              "internal-consistency error (bug trap): determinant weight "
              "is not integral");
        out[f][b - 1].assign(d, Int(num / d).convert_to<long>());
      }
    return normal_form(out);
  }

  Irred det(const BundleSum& s) const {
    std::vector<std::vector<Int>> acc(num_factors());
    for (long f = 0; f < num_factors(); ++f)
      acc[f].assign(shapes_[f].num_blocks(), Int(0));
    for (auto& [e, m] : s) {
      Irred de = det(e);
      for (long f = 0; f < num_factors(); ++f)
        for (size_t b = 0; b < de[f].size(); ++b)
          acc[f][b] += m * de[f][b][0];
    }
    Irred out = trivial();
    for (long f = 0; f < num_factors(); ++f)
      for (size_t b = 0; b < out[f].size(); ++b)
        out[f][b].assign(out[f][b].size(), acc[f][b].convert_to<long>());
    return normal_form(out);
  }

  /** Tensor product of two summands, expanded blockwise. */
  BundleSum tensor(const Irred& a, const Irred& b) const {
    check(a);
    check(b);
    std::vector<std::pair<Irred, Int>> cur{{trivial(), Int(1)}};
    for (long f = 0; f < num_factors(); ++f)
      for (long blk = 1; blk <= shapes_[f].num_blocks(); ++blk) {
        auto prods = gl_tensor(a[f][blk - 1], b[f][blk - 1],
                               shapes_[f].block_rank(blk));
        std::vector<std::pair<Irred, Int>> next;
        for (auto& [e, m] : cur)
          for (auto& [w, c] : prods) {
            Irred e2 = e;
            e2[f][blk - 1] = w;
            next.emplace_back(std::move(e2), Int(m * c));
          }
        cur = std::move(next);
      }
    BundleSum out;
    for (auto& [e, m] : cur) out[normal_form(e)] += m;
    return out;
  }

  BundleSum tensor(const BundleSum& a, const BundleSum& b) const {
    BundleSum out;
    for (auto& [ea, ma] : a)
      for (auto& [eb, mb] : b)
        add_into(out, tensor(ea, eb), ma * mb);
    return out;
  }

  static void add_into(BundleSum& dst, const BundleSum& src,
                       const Int& mult = 1) {
    for (auto& [e, m] : src) {
      Int& v = dst[e];
      v += m * mult;
      if (v == 0) dst.erase(e);
    }
  }

  static BundleSum add(const BundleSum& a, const BundleSum& b) {
    BundleSum out = a;
    add_into(out, b);
    return out;
  }

  /** Schur functor S_lam of one summand; memoized. */
  BundleSum schur_irred(const Partition& lam0, const Irred& e_raw) const {
    Partition lam = canon_partition(lam0);
    if (lam.empty()) return unit_sum();
    Irred e = normal_form(e_raw);
    auto key = std::make_pair(lam, e);
    {
      std::shared_lock lk(cache_mu_);
      auto it = schur_cache_.find(key);
      if (it != schur_cache_.end()) return it->second;
    }
    BundleSum r = schur_impl(lam, e);
    std::unique_lock lk(cache_mu_);
    return schur_cache_.emplace(std::move(key), std::move(r)).first->second;
  }

  BundleSum wedge_irred(long k, const Irred& e) const {
    if (k < 0) return {};
    return schur_irred(Partition(k, 1), e);
  }

  BundleSum sym_irred(long k, const Irred& e) const {
    if (k < 0) return {};
    if (k == 0) return unit_sum();
    return schur_irred(Partition{k}, e);
  }

  /** Exterior power of a sum, expanded one summand at a time. */
  BundleSum wedge(long k, const BundleSum& s) const {
    return power_sum(k, s, /*wedgePower=*/true);
  }

  BundleSum sym(long k, const BundleSum& s) const {
    return power_sum(k, s, /*wedgePower=*/false);
  }

  /** Schur functor of a sum via Littlewood-Richardson branching. */
  BundleSum schur(const Partition& lam0, const BundleSum& s) const {
    Partition lam = canon_partition(lam0);
    if (lam.empty()) return unit_sum();
    BundleSum sn = normal_sum(s);
    auto key = std::make_pair(lam, sn);
    {
      std::shared_lock lk(cache_mu_);
      auto it = sum_cache_.find(key);
      if (it != sum_cache_.end()) return it->second;
    }
    std::vector<Irred> items = flatten(sn);
    BundleSum r = schur_rec(lam, items, 0);
    std::unique_lock lk(cache_mu_);
    return sum_cache_.emplace(std::move(key), std::move(r)).first->second;
  }

  /** Cotangent summands R_b^v (x) R_a, a < b, of one factor. */
  std::vector<Irred> cotangent_graded(long f) const {
    std::vector<Irred> out;
    long nb = shapes_[f].num_blocks();
    for (long b = 2; b <= nb; ++b)
      for (long a = 1; a < b; ++a) {
        Irred e = trivial();
        e[f][a - 1].back() = -1;
        e[f][b - 1][0] = 1;
        out.push_back(e);
      }
    return out;
  }

  std::vector<Irred> cotangent_graded() const {
    std::vector<Irred> out;
    for (long f = 0; f < num_factors(); ++f)
      for (auto& e : cotangent_graded(f)) out.push_back(e);
    return out;
  }

  BundleSum cotangent_sum() const {
    BundleSum out;
    for (auto& e : cotangent_graded()) out[normal_form(e)] += 1;
    return out;
  }

  /** Bott cohomology of one summand, multiplied across the factors. */
  IrredCohom cohomology(const Irred& e) const {
    check(e);
    IrredCohom out;
    out.acyclic = false;
    out.degree = 0;
    out.dim = 1;
    for (long f = 0; f < num_factors(); ++f) {
      BwbResult r = bwb(shapes_[f], e[f]);
      if (r.acyclic) return {};
      out.degree += r.degree;
      out.dim *= r.dim;
    }
    return out;
  }

  /** Exact cohomology table degree -> dimension of a sum. */
  std::map<long, Int> cohomology(const BundleSum& s) const {
    std::map<long, Int> h;
    for (auto& [e, m] : s) {
      IrredCohom r = cohomology(e);
      if (!r.acyclic) h[r.degree] += m * r.dim;
    }
    return h;
  }

  Int euler(const BundleSum& s) const {
    Int chi = 0;
    for (auto& [q, d] : cohomology(s)) {
      if (q % 2 == 0)
        chi += d;
      else
        chi -= d;
    }
    return chi;
  }

  std::string irred_str(const Irred& e) const {
    std::string s = "[";
    for (size_t f = 0; f < e.size(); ++f) {
      if (f) s += " | ";
      for (size_t b = 0; b < e[f].size(); ++b) {
        if (b) s += " ; ";
        for (size_t i = 0; i < e[f][b].size(); ++i) {
          if (i) s += ",";
          s += std::to_string(e[f][b][i]);
        }
      }
    }
    return s + "]";
  }

  std::string bundle_str(const BundleSum& s) const {
    if (s.empty()) return "0";
    std::string out;
    for (auto& [e, m] : s) {
      if (!out.empty()) out += " + ";
      if (m != 1) out += m.str() + "*";
      out += irred_str(e);
    }
    return out;
  }

  /** Summands repeated by multiplicity, in key order. */
  std::vector<Irred> flatten(const BundleSum& s) const {
    std::vector<Irred> items;
    for (auto& [e, m] : s) {
      if (m < 0) throw std::invalid_argument("negative multiplicity");
      long mm = m.convert_to<long>();
      for (long i = 0; i < mm; ++i) items.push_back(e);
    }
    return items;
  }

 private:
  [[noreturn]] void unsupported(const Irred& e) const {
    std::string msg = "plethysm unsupported: Schur functor of ";
    msg += irred_str(e);
    throw std::runtime_error(msg);
  }

  static std::vector<long> embed_partition(const Partition& lam, long d,
                                           bool dualAlphabet) {
    std::vector<long> w(lam.begin(), lam.end());
    w.resize(d, 0);
    if (dualAlphabet) {
      std::reverse(w.begin(), w.end());
      for (long& x : w) x = -x;
    }
    return w;
  }

  BundleSum schur_impl(const Partition& lam, const Irred& e) const {
    if (lam.size() == 1 && lam[0] == 1) return BundleSum{{e, Int(1)}};
    if (lam[0] == 1 && lam.size() > 1) {
      long k = (long)lam.size();
      Int r = rank(e);
      if (r < k) return {};
      if (r == k) return BundleSum{{det(e), Int(1)}};
      if (r < 2 * Int(k)) {
        long k2 = Int(r - k).convert_to<long>();
        return tensor(wedge_irred(k2, dual(e)), BundleSum{{det(e), Int(1)}});
      }
    }
    return schur_functor(lam, e);
  }

  /**
   * Core dispatcher.  Peels the line part off every block, turning the
   * rest into fundamental alphabets (a cofundamental block is rewritten
   * as the dual alphabet times a determinant), then applies S_lam: zero
   * or a line power for no alphabet, a single weight for one, the Cauchy
   * decomposition for an exterior or symmetric power of two.  Anything
   * else has no expansion here and is rejected.
   */
  BundleSum schur_functor(const Partition& lam, const Irred& e) const {
    struct Alpha {
      long f, b, d;
      bool dualA;
    };
    std::vector<std::vector<long>> shift(num_factors());
    std::vector<Alpha> alph;
    for (long f = 0; f < num_factors(); ++f) {
      long nb = shapes_[f].num_blocks();
      shift[f].assign(nb, 0);
      for (long b = 1; b <= nb; ++b) {
        const auto& blk = e[f][b - 1];
        long c = blk.back();
        shift[f][b - 1] = c;
        long d = shapes_[f].block_rank(b);
        long p = 0;
        bool column = true;
        for (long x : blk) {
          if (x - c == 1)
            p++;
          else if (x - c != 0)
            column = false;
        }
        if (p == 0 && column) continue;
        if (!column) unsupported(e);
        if (p == 1) {
          alph.push_back({f, b, d, false});
        } else if (p == d - 1) {
          alph.push_back({f, b, d, true});
          shift[f][b - 1] += 1;
        } else {
          unsupported(e);
        }
      }
    }
    long K = part_weight(lam);
    auto finish = [&](Irred t) {
      for (long f = 0; f < num_factors(); ++f)
        for (size_t b = 0; b < t[f].size(); ++b)
          if (shift[f][b] != 0)
            for (long& x : t[f][b]) x += K * shift[f][b];
      return normal_form(std::move(t));
    };
    BundleSum out;
    if (alph.empty()) {
      if ((long)lam.size() <= 1) out[finish(trivial())] += 1;
      return out;
    }
    if (alph.size() == 1) {
      const Alpha& a = alph[0];
      if ((long)lam.size() > a.d) return out;
      Irred t = trivial();
      t[a.f][a.b - 1] = embed_partition(lam, a.d, a.dualA);
      out[finish(std::move(t))] += 1;
      return out;
    }
    if (alph.size() == 2) {
      bool isRow = lam.size() == 1;
      bool isColumn = lam[0] == 1;
      if (!isRow && !isColumn) unsupported(e);
      auto pairs = isRow ? cauchy_sym(K, alph[0].d, alph[1].d)
                         : cauchy_wedge(K, alph[0].d, alph[1].d);
      for (auto& [l1, l2] : pairs) {
        Irred t = trivial();
        t[alph[0].f][alph[0].b - 1] =
            embed_partition(l1, alph[0].d, alph[0].dualA);
        t[alph[1].f][alph[1].b - 1] =
            embed_partition(l2, alph[1].d, alph[1].dualA);
        out[finish(std::move(t))] += 1;
      }
      return out;
    }
    unsupported(e);
  }

  BundleSum power_sum(long k, const BundleSum& s, bool wedgePower) const {
    if (k < 0) return {};
    if (k == 0) return unit_sum();
    BundleSum sn = normal_sum(s);
    Partition lam = wedgePower ? Partition(k, 1) : Partition{k};
    auto key = std::make_pair(lam, sn);
    {
      std::shared_lock lk(cache_mu_);
      auto it = sum_cache_.find(key);
      if (it != sum_cache_.end()) return it->second;
    }
    std::vector<BundleSum> B(k + 1);
    B[0] = unit_sum();
    for (const Irred& a : flatten(sn)) {
      std::vector<BundleSum> nb(k + 1);
      for (long j = 0; j <= k; ++j)
        for (long i = 0; i <= j; ++i) {
          if (B[j - i].empty()) continue;
          BundleSum w = wedgePower ? wedge_irred(i, a) : sym_irred(i, a);
          if (w.empty()) continue;
          add_into(nb[j], tensor(B[j - i], w));
        }
      B = std::move(nb);
    }
    std::unique_lock lk(cache_mu_);
    return sum_cache_.emplace(std::move(key), std::move(B[k]))
        .first->second;
  }

  BundleSum schur_rec(const Partition& lam, const std::vector<Irred>& items,
                      size_t idx) const {
    if (idx == items.size())
      return lam.empty() ? unit_sum() : BundleSum{};
    if (idx + 1 == items.size()) return schur_irred(lam, items[idx]);
    if (lam.empty()) return unit_sum();
    BundleSum out;
    for (const Partition& mu : subpartitions(lam)) {
      BundleSum head = schur_irred(mu, items[idx]);
      if (head.empty()) continue;
      long rem = part_weight(lam) - part_weight(mu);
      if (rem == 0) {
        if (mu == lam) add_into(out, head);
        continue;
      }
      std::vector<Partition> nus;
      partitions_of(rem, (long)lam.size(), lam[0], nus);
      for (const Partition& nu : nus) {
        long c = lr_coefficient(mu, nu, lam);
        if (c == 0) continue;
        add_into(out, tensor(head, schur_rec(nu, items, idx + 1)), Int(c));
      }
    }
    return out;
  }

  std::vector<FlagShape> shapes_;
  mutable std::shared_mutex cache_mu_;
  mutable std::map<std::pair<Partition, Irred>, BundleSum> schur_cache_;
  mutable std::map<std::pair<Partition, BundleSum>, BundleSum> sum_cache_;
};

}  // namespace fzl
