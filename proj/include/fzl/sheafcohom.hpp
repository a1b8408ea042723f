#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fzl/bundlecalc.hpp"
#include "fzl/chern.hpp"
#include "fzl/chowring.hpp"
#include "fzl/equivariant.hpp"

namespace fzl {

/** Interval table of cohomology dimensions: h^q in [lo[q], hi[q]]. */
struct Table {
  std::vector<Int> lo, hi;

  Table() = default;
  explicit Table(long maxq) : lo(maxq + 1, Int(0)), hi(maxq + 1, Int(0)) {}

  long maxq() const { return (long)lo.size() - 1; }
  Int lo_at(long q) const { return (q < 0 || q > maxq()) ? Int(0) : lo[q]; }
  Int hi_at(long q) const { return (q < 0 || q > maxq()) ? Int(0) : hi[q]; }
  bool exact_at(long q) const { return lo_at(q) == hi_at(q); }
  bool exact() const {
    for (size_t q = 0; q < lo.size(); ++q)
      if (lo[q] != hi[q]) return false;
    return true;
  }

  std::string str() const {
    std::string s;
    for (long q = 0; q <= maxq(); ++q) {
      if (q) s += " ";
      s += "h" + std::to_string(q) + "=";
      if (exact_at(q))
        s += lo[q].str();
      else
        s += "[" + lo[q].str() + "," + hi[q].str() + "]";
    }
    return s;
  }
};

inline Table exact_table(const std::map<long, Int>& h, long maxq) {
  Table t(maxq);
  for (auto& [q, d] : h) {
    if (q < 0 || q > maxq)
      throw std::logic_error(
          "internal-consistency error (bug trap): cohomology degree out of "
          "range");
    t.lo[q] = d;
    t.hi[q] = d;
  }
  return t;
}

namespace detail {
inline Int pos_part(const Int& x) { return x > 0 ? x : Int(0); }
}  // namespace detail

/**
 * Bounds from the long exact sequence of 0 -> A -> B -> C -> 0, solving
 * for the named term given interval tables of the other two.
 */
inline Table ses_quot(const Table& A, const Table& B) {
  long m = std::max(A.maxq(), B.maxq());
  Table C(m);
  for (long q = 0; q <= m; ++q) {
    C.hi[q] = B.hi_at(q) + A.hi_at(q + 1);
    C.lo[q] = detail::pos_part(B.lo_at(q) - A.hi_at(q)) +
              detail::pos_part(A.lo_at(q + 1) - B.hi_at(q + 1));
  }
  return C;
}

inline Table ses_sub(const Table& B, const Table& C) {
  long m = std::max(B.maxq(), C.maxq() + 1);
  Table A(m);
  for (long q = 0; q <= m; ++q) {
    A.hi[q] = B.hi_at(q) + C.hi_at(q - 1);
    A.lo[q] = detail::pos_part(B.lo_at(q) - C.hi_at(q)) +
              detail::pos_part(C.lo_at(q - 1) - B.hi_at(q - 1));
  }
  return A;
}

inline Table ses_mid(const Table& A, const Table& C) {
  long m = std::max(A.maxq(), C.maxq());
  Table B(m);
  for (long q = 0; q <= m; ++q) {
    B.hi[q] = A.hi_at(q) + C.hi_at(q);
    B.lo[q] = detail::pos_part(A.lo_at(q) - C.hi_at(q - 1)) +
              detail::pos_part(C.lo_at(q) - A.hi_at(q + 1));
  }
  return B;
}

/**
 * Clamp every interval of t against the alternating-sum constraint
 * sum (-1)^q h^q = chi, iterating to a fixed point.
 */
inline void chi_tighten(Table& t, const Int& chi) {
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    for (long q = 0; q <= t.maxq(); ++q) {
      Int nlo = (q % 2 == 0) ? chi : Int(-chi);
      Int nhi = nlo;
      for (long p = 0; p <= t.maxq(); ++p) {
        if (p == q) continue;
        if ((p % 2) == (q % 2)) {
          nlo -= t.hi[p];
          nhi -= t.lo[p];
        } else {
          nlo += t.lo[p];
          nhi += t.hi[p];
        }
      }
      if (nlo > t.lo[q]) {
        t.lo[q] = nlo;
        changed = true;
      }
      if (nhi < t.hi[q]) {
        t.hi[q] = nhi;
        changed = true;
      }
      if (t.lo[q] > t.hi[q])
        throw std::logic_error(
            "internal-consistency error (bug trap): interval table "
            "contradicts its Euler characteristic");
    }
    if (!changed) return;
  }
}

/** A filtered bundle as its graded pieces, subbundle end first. */
using Filtered = std::vector<BundleSum>;

/**
 * Cohomology engine for a zero locus X of a general section of a
 * completely reducible bundle F inside a product of flag factors Y.
 * Euler characteristics are computed along two independent routes (Bott
 * plus Koszul on one side, Riemann-Roch on the other) and must agree;
 * graded tables are propagated as intervals through the Koszul and
 * (co)normal sequences.
 */
class SheafCohom {
 public:
  SheafCohom(std::vector<FlagShape> shapes, const BundleSum& f)
      : ops_(shapes), ring_(shapes), chern_(ring_) {
    f_ = ops_.normal_sum(f);
    fdual_ = ops_.dual(f_);
    rank_f_ = ops_.rank(f_).convert_to<long>();
    if (rank_f_ > ops_.dim())
      throw std::invalid_argument("bundle rank exceeds the ambient dimension");
    ch_f_ = ch(f_);
    ch_fdual_ = ch(fdual_);
    ch_omega_ = chern_.gc_zero();
    for (auto& p : ops_.cotangent_graded())
      ch_omega_ =
          chern_.gc_add(ch_omega_, chern_.ch_irred(ops_.normal_form(p)));
    ctop_ = chern_.chern_from_ch(ch_f_, rank_f_)[rank_f_];
    GradedClass invtd =
        chern_.gc_exp(chern_.gc_scale(chern_.log_todd(ch_f_), Rat(-1)));
    restrict_ = chern_.gc_mul(chern_.gc_split(ctop_),
                              chern_.gc_mul(chern_.todd_tangent(), invtd));
  }

  SheafCohom(const SheafCohom&) = delete;
  SheafCohom& operator=(const SheafCohom&) = delete;

  const BundleOps& ops() const { return ops_; }
  const ChowRing& ring() const { return ring_; }
  const ChernCalc& chern() const { return chern_; }
  const BundleSum& f() const { return f_; }
  const BundleSum& f_dual() const { return fdual_; }
  long rank_f() const { return rank_f_; }
  long dim_y() const { return ops_.dim(); }
  long dim_x() const { return dim_y() - rank_f_; }
  const Poly& c_top_f() const { return ctop_; }
  const GradedClass& ch_omega_y() const { return ch_omega_; }
  const GradedClass& ch_f_dual() const { return ch_fdual_; }

  GradedClass ch(const BundleSum& s) const {
    GradedClass g = chern_.gc_zero();
    for (auto& [e, m] : s)
      g = chern_.gc_add(g, chern_.gc_scale(chern_.ch_irred(e), Rat(m)));
    return g;
  }

  /** First Chern class of the line bundle O(t). */
  Poly c1_line(const std::vector<std::vector<long>>& twists) const {
    Poly out;
    for (long f = 0; f < ops_.num_factors(); ++f)
      for (size_t a = 0; a < twists[f].size(); ++a)
        for (long b = 1; b <= (long)a + 1; ++b)
          poly_axpy(out, ring_.chern(f, b, 1), Rat(-twists[f][a]));
    return out;
  }

  /** Pushforward of integration over X: multiply by c_top(F) first. */
  Rat integrate_on_x(const Poly& a) const {
    return ring_.integrate(ring_.mul(a, ctop_));
  }

  Rat integrate_restricted(const GradedClass& che) const {
    GradedClass g = chern_.gc_mul(che, restrict_);
    return ring_.integrate(chern_.gc_collapse(g));
  }

  /** chi on the ambient space, asserted along both routes. */
  Int chi_y(const BundleSum& e) const {
    Int bott = ops_.euler(e);
    Rat hrr = chern_.chi_ambient(ch(e));
    if (hrr != Rat(bott))
      throw std::logic_error(
          "internal-consistency error (bug trap): ambient Euler "
          "characteristic differs between the Bott and Riemann-Roch routes");
    return bott;
  }

  Table table_y(const BundleSum& e) const {
    return exact_table(ops_.cohomology(e), dim_y());
  }

  /** Graded table of a filtered bundle on Y, chained through its pieces. */
  Table table_y_filtered(const Filtered& g) const {
    if (g.empty()) return Table(dim_y());
    Table acc = table_y(g[0]);
    Int chi = ops_.euler(g[0]);
    for (size_t i = 1; i < g.size(); ++i) {
      acc = ses_mid(acc, table_y(g[i]));
      chi += ops_.euler(g[i]);
      chi_tighten(acc, chi);
    }
    return acc;
  }

  /** chi of the restriction to X, asserted along both routes. */
  Int chi_x(const BundleSum& e) const {
    Int kos = 0;
    for (long j = 0; j <= rank_f_; ++j) {
      Int c = ops_.euler(ops_.tensor(ops_.wedge(j, fdual_), e));
      if (j % 2 == 0)
        kos += c;
      else
        kos -= c;
    }
    Rat hrr = integrate_restricted(ch(e));
    if (hrr != Rat(kos))
      throw std::logic_error(
          "internal-consistency error (bug trap): restricted Euler "
          "characteristic differs between the Koszul and Riemann-Roch "
          "routes");
    return kos;
  }

  Int chi_x_filtered(const Filtered& g) const {
    Int chi = 0;
    for (auto& piece : g) chi += chi_x(piece);
    return chi;
  }

  /**
   * Interval table of H^*(X, E|_X) through the Koszul resolution.  A
   * non-exact chase is retried with the equivariant collapse certificate,
   * which pins the table whenever symmetry forbids every differential.
   */
  Table table_x(const BundleSum& e) const {
    BundleSum key = ops_.normal_sum(e);
    auto hit = tx_memo_.find(key);
    if (hit != tx_memo_.end()) return hit->second;
    Table t = table_x_filtered(Filtered{key});
    if (!t.exact()) {
      if (auto c = collapse_table_x(key)) {
        for (long q = 0; q <= dim_x(); ++q)
          if (c->lo[q] < t.lo_at(q) || c->lo[q] > t.hi_at(q))
            throw std::logic_error(
                "internal-consistency error (bug trap): certified table "
                "escapes its interval bounds");
        t = *c;
      }
    }
    tx_memo_.emplace(std::move(key), t);
    return t;
  }

  Table table_x_filtered(const Filtered& g) const {
    auto term = [&](long j) {
      Filtered kj = tensor_filtered(g, ops_.wedge(j, fdual_));
      Table t = table_y_filtered(kj);
      Int chi = 0;
      for (auto& piece : kj) chi += ops_.euler(piece);
      return std::make_pair(t, chi);
    };
    auto top = term(rank_f_);
    Table m = top.first;
    Int chim = top.second;
    for (long j = rank_f_ - 1; j >= 0; --j) {
      auto bj = term(j);
      Table c = ses_quot(m, bj.first);
      Int chic = bj.second - chim;
      if (j == 0)
        for (long q = dim_x() + 1; q <= c.maxq(); ++q) {
          c.lo[q] = 0;
          c.hi[q] = 0;
        }
      chi_tighten(c, chic);
      m = std::move(c);
      chim = chic;
    }
    Table out(dim_x());
    for (long q = 0; q <= dim_x(); ++q) {
      out.lo[q] = m.lo_at(q);
      out.hi[q] = m.hi_at(q);
    }
    return out;
  }

  Filtered tensor_filtered(const Filtered& g, const BundleSum& s) const {
    Filtered out;
    for (auto& piece : g) out.push_back(ops_.tensor(piece, s));
    return out;
  }

  /** Cotangent bundle of Y as a filtered object, subbundle end first. */
  Filtered cotangent_filtered() const {
    std::map<long, BundleSum> by;
    for (auto& [lev, e] : cotangent_leveled()) by[lev][e] += 1;
    Filtered out;
    for (auto it = by.rbegin(); it != by.rend(); ++it)
      out.push_back(it->second);
    return out;
  }

  Filtered tangent_filtered() const {
    std::map<long, BundleSum> by;
    for (auto& [lev, e] : cotangent_leveled())
      by[lev][ops_.normal_form(ops_.dual(e))] += 1;
    Filtered out;
    for (auto it = by.begin(); it != by.end(); ++it) out.push_back(it->second);
    return out;
  }

  /** Exterior power of the cotangent bundle, filtered by total level. */
  const Filtered& wedge_cotangent(long p) const {
    auto it = womega_.find(p);
    if (it != womega_.end()) return it->second;
    std::vector<std::map<long, BundleSum>> st(p + 1);
    st[0][0] = ops_.unit_sum();
    for (auto& [lev, a] : cotangent_leveled()) {
      std::vector<std::map<long, BundleSum>> nb(p + 1);
      for (long j = 0; j <= p; ++j)
        for (long i = 0; i <= j; ++i) {
          BundleSum w = ops_.wedge_irred(i, a);
          if (w.empty()) continue;
          for (auto& [tot, s] : st[j - i])
            BundleOps::add_into(nb[j][tot + i * lev], ops_.tensor(s, w));
        }
      st = std::move(nb);
    }
    Filtered out;
    for (auto it2 = st[p].rbegin(); it2 != st[p].rend(); ++it2)
      if (!it2->second.empty()) out.push_back(it2->second);
    return womega_.emplace(p, std::move(out)).first->second;
  }

  /** Interval table of Omega_X (x) S|_X via the conormal sequence. */
  Table omega_x_table(const BundleSum& s) const {
    BundleSum a = ops_.tensor(fdual_, s);
    Filtered b = tensor_filtered(cotangent_filtered(), s);
    Table t = ses_quot(table_x(a), table_x_filtered(b));
    Int chi = chi_x_filtered(b) - chi_x(a);
    chi_tighten(t, chi);
    return t;
  }

  /** Interval table of T_X (x) S|_X via the normal sequence. */
  Table tangent_x_table(const BundleSum& s) const {
    Filtered b = tensor_filtered(tangent_filtered(), s);
    BundleSum c = ops_.tensor(f_, s);
    Table t = ses_sub(table_x_filtered(b), table_x(c));
    Int chi = chi_x_filtered(b) - chi_x(c);
    chi_tighten(t, chi);
    return t;
  }

  Int chi_tangent() const {
    return chi_x_filtered(tangent_filtered()) - chi_x(f_);
  }

  /**
   * Interval table of the two-forms on X.  The second wedge of the
   * conormal sequence filters Lambda^2 of the restricted cotangent bundle
   * in three stages, and on a fourfold the result is intersected with its
   * own Serre dual.
   */
  Table omega2_x_table() const {
    BundleSum w2f = ops_.wedge(2, fdual_);
    Table g1 = ses_mid(table_x(w2f), omega_x_table(fdual_));
    Filtered of = tensor_filtered(cotangent_filtered(), fdual_);
    Int chi_om_f = chi_x_filtered(of) - chi_x(ops_.tensor(fdual_, fdual_));
    chi_tighten(g1, chi_x(w2f) + chi_om_f);
    Table t = ses_quot(g1, table_x_filtered(wedge_cotangent(2)));
    Int chi2 = chi_omega(2);
    chi_tighten(t, chi2);
    if (dim_x() == 4) {
      Table sym(4);
      for (long q = 0; q <= 4; ++q) {
        sym.lo[q] = std::max(t.lo_at(q), t.lo_at(4 - q));
        sym.hi[q] = std::min(t.hi_at(q), t.hi_at(4 - q));
        if (sym.lo[q] > sym.hi[q])
          throw std::logic_error(
              "internal-consistency error (bug trap): two-form table is "
              "not Serre symmetric");
      }
      chi_tighten(sym, chi2);
      return sym;
    }
    return t;
  }

  /**
   * chi(X, Omega_X^p), exact.  The class of Omega_X^p expands through the
   * conormal sequence; the bundle route sums restricted Euler
   * characteristics, the character route integrates the same expansion at
   * Chern-character level, and the two must agree.
   */
  Int chi_omega(long p) const {
    Int bundle = 0;
    GradedClass charside = chern_.gc_zero();
    for (long j = 0; j <= p; ++j) {
      BundleSum sj = ops_.sym(j, fdual_);
      Filtered w = tensor_filtered(wedge_cotangent(p - j), sj);
      Int c = chi_x_filtered(w);
      GradedClass g = chern_.gc_mul(chern_.wedge_ch(p - j, ch_omega_),
                                    chern_.sym_ch(j, ch_fdual_));
      if (j % 2 == 0) {
        bundle += c;
        charside = chern_.gc_add(charside, g);
      } else {
        bundle -= c;
        charside = chern_.gc_sub(charside, g);
      }
    }
    Rat hrr = integrate_restricted(charside);
    if (hrr != Rat(bundle))
      throw std::logic_error(
          "internal-consistency error (bug trap): chi of the p-forms "
          "differs between the bundle and character routes");
    return bundle;
  }

 private:
  /**
   * Summands tracked together with their honest per-factor degrees.  The
   * stored weights are normalized modulo determinant twists of each factor,
   * so the true total degree is carried separately; it is additive under
   * tensor and wedge, which pins the discarded twist of every summand.
   */
  using HonestTerms = std::map<std::pair<Irred, std::vector<long>>, Int>;

  std::vector<long> irred_degrees(const Irred& e) const {
    std::vector<long> d(ops_.num_factors(), 0);
    for (long f = 0; f < ops_.num_factors(); ++f)
      for (auto& blk : e[f])
        for (long x : blk) d[f] += x;
    return d;
  }

  HonestTerms honest_lift(const BundleSum& s,
                          const std::vector<long>& deg) const {
    HonestTerms out;
    for (auto& [e, m] : s) out[{e, deg}] += m;
    return out;
  }

  HonestTerms honest_tensor(const HonestTerms& a, const HonestTerms& b) const {
    HonestTerms out;
    for (auto& [ka, ma] : a)
      for (auto& [kb, mb] : b) {
        std::vector<long> d = ka.second;
        for (size_t i = 0; i < d.size(); ++i) d[i] += kb.second[i];
        for (auto& [e, c] : ops_.tensor(ka.first, kb.first))
          out[{e, d}] += ma * mb * c;
      }
    return out;
  }

  /** Cohomology cells of an honest sum: degree -> group representation. */
  std::map<long, RepSum> honest_cells(const HonestTerms& terms) const {
    std::map<long, RepSum> out;
    for (auto& [key, mult] : terms) {
      const Irred& e = key.first;
      std::vector<long> dn = irred_degrees(e);
      long q = 0;
      ProdIrrep p(ops_.num_factors());
      bool acyclic = false;
      for (long f = 0; f < ops_.num_factors(); ++f) {
        BwbResult r = bwb(ops_.shapes()[f], e[f]);
        if (r.acyclic) {
          acyclic = true;
          break;
        }
        long n = ops_.shapes()[f].n;
        long diff = key.second[f] - dn[f];
        if (diff % n != 0)
          throw std::logic_error(
              "internal-consistency error (bug trap): honest degree lift "
              "is not integral");
        GlWeight w = r.weight;
        for (long& x : w) x += diff / n;
        p[f] = std::move(w);
        q += r.degree;
      }
      if (!acyclic) out[q][p] += mult;
    }
    return out;
  }

  /**
   * Equivariant collapse certificate.  The page-one cells of the Koszul
   * resolution of E|_X and the section space W = H^0(F) are representations
   * of the product of the factor groups, and the page-r differential out of
   * any cell is an equivariant family of maps, polynomial of degree r in
   * the section.  By induction on pages: while every earlier differential
   * between every pair of cells is forbidden by symmetry, page r equals
   * page one, so its differentials are honest equivariant families between
   * the page-one representations.  If every pair in d_r position has a zero
   * family space, nothing ever cancels and the page-one numbers are final.
   */
  std::optional<Table> collapse_table_x(const BundleSum& e) const {
    std::vector<long> ranks;
    for (auto& fl : ops_.shapes()) ranks.push_back(fl.n);
    std::vector<long> zero(ops_.num_factors(), 0);

    RepSum w;
    std::vector<HonestTerms> layers(rank_f_ + 1);
    layers[0] = honest_lift(ops_.unit_sum(), zero);
    for (auto& [ef, m] : f_) {
      for (auto& [qq, rep] : honest_cells(honest_lift(
               BundleSum{{ef, m}}, irred_degrees(ef)))) {
        if (qq != 0) continue;
        for (auto& [p, c] : rep) w[p] += c;
      }
      Irred ed = ops_.dual(BundleSum{{ef, Int(1)}}).begin()->first;
      std::vector<long> dd = irred_degrees(ef);
      for (long& x : dd) x = -x;
      std::vector<HonestTerms> next(rank_f_ + 1);
      for (long a = 0; a <= rank_f_; ++a) {
        BundleSum wa = ops_.wedge(a, BundleSum{{ed, m}});
        if (wa.empty()) break;
        std::vector<long> da(dd);
        for (long& x : da) x *= a;
        HonestTerms ha = honest_lift(wa, da);
        for (long t = 0; t + a <= rank_f_; ++t) {
          if (layers[t].empty()) continue;
          for (auto& [k, c] : honest_tensor(layers[t], ha)) next[t + a][k] += c;
        }
      }
      layers = std::move(next);
    }

    HonestTerms he;
    for (auto& [ee, mm] : e) he[{ee, irred_degrees(ee)}] += mm;

    std::vector<std::map<long, RepSum>> cells(rank_f_ + 1);
    for (long j = 0; j <= rank_f_; ++j) {
      cells[j] = honest_cells(honest_tensor(layers[j], he));
      std::map<long, Int> expect =
          ops_.cohomology(ops_.tensor(ops_.wedge(j, fdual_), e));
      std::map<long, Int> got;
      for (auto& [q, rep] : cells[j]) got[q] = rep_dim(ranks, rep);
      if (got != expect)
        throw std::logic_error(
            "internal-consistency error (bug trap): honest cells disagree "
            "with the cohomology table");
    }

    for (long j = 0; j <= rank_f_; ++j)
      for (auto& [q, rep] : cells[j])
        for (long r = 1; r <= j; ++r) {
          auto it = cells[j - r].find(q - r + 1);
          if (it == cells[j - r].end()) continue;
          if (r > 4) return std::nullopt;
          if (equivariant_map_multiplicity(ranks, r, w, rep, it->second) != 0)
            return std::nullopt;
        }

    Table out(dim_x());
    Int chi = 0;
    for (long j = 0; j <= rank_f_; ++j)
      for (auto& [q, rep] : cells[j]) {
        long t = q - j;
        Int d = rep_dim(ranks, rep);
        if (t < 0 || t > dim_x())
          throw std::logic_error(
              "internal-consistency error (bug trap): a certified cell "
              "sits outside the degree window");
        out.lo[t] += d;
        out.hi[t] += d;
        chi += (t % 2 == 0) ? d : -d;
      }
    if (chi != chi_x(e))
      throw std::logic_error(
          "internal-consistency error (bug trap): the certified table "
          "contradicts the Euler characteristic");
    return out;
  }

  std::vector<std::pair<long, Irred>> cotangent_leveled() const {
    std::vector<std::pair<long, Irred>> out;
    for (long f = 0; f < ops_.num_factors(); ++f) {
      long nb = ops_.shapes()[f].num_blocks();
      for (long b = 2; b <= nb; ++b)
        for (long a = 1; a < b; ++a) {
          Irred e = ops_.trivial();
          e[f][a - 1].back() = -1;
          e[f][b - 1][0] = 1;
          out.emplace_back(b - a, ops_.normal_form(e));
        }
    }
    return out;
  }

  BundleOps ops_;
  ChowRing ring_;
  ChernCalc chern_;
  BundleSum f_, fdual_;
  long rank_f_ = 0;
  GradedClass ch_f_, ch_fdual_, ch_omega_, restrict_;
  Poly ctop_;
  mutable std::map<long, Filtered> womega_;
  mutable std::map<BundleSum, Table> tx_memo_;
};

}  // namespace fzl
