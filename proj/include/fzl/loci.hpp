#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fzl/bundlecalc.hpp"
#include "fzl/chern.hpp"

namespace fzl {

/** Rational-coefficient polynomial in one variable, ascending coefficients. */
struct HilbertPoly {
  std::vector<Rat> coeff;

  long degree() const {
    for (long i = (long)coeff.size() - 1; i >= 0; --i)
      if (coeff[i] != 0) return i;
    return 0;
  }

  Rat eval(const Rat& k) const {
    Rat v = 0;
    for (long i = (long)coeff.size() - 1; i >= 0; --i) v = v * k + coeff[i];
    return v;
  }

  bool integer_valued(long lo, long hi) const {
    for (long k = lo; k <= hi; ++k)
      if (!is_integer(eval(k))) return false;
    return true;
  }

  std::string str(const std::string& var = "k") const {
    std::ostringstream os;
    bool first = true;
    for (long i = degree(); i >= 0; --i) {
      Rat c = i < (long)coeff.size() ? coeff[i] : Rat(0);
      if (c == 0 && !(first && i == 0)) continue;
      if (!first) os << (c < 0 ? " - " : " + ");
      Rat a = (!first && c < 0) ? Rat(-c) : c;
      bool unit = (a == 1 || a == -1) && i > 0;
      if (!unit) {
        if (is_integer(a))
          os << a;
        else
          os << "(" << a << ")";
      } else if (a == -1) {
        os << "-";
      }
      if (i > 0) {
        if (!unit) os << "*";
        os << var;
        if (i > 1) os << "^" << i;
      }
      first = false;
    }
    return os.str();
  }
};

/**
 * A morphism of bundles source -> target on a product of flag varieties,
 * optionally restricted to the zero locus of a general section of `ci`.
 * The degeneracy locus Z is where the morphism fails to be surjective;
 * its expected codimension in the (restricted) base is e - f + 1.
 */
struct MorphismData {
  std::vector<FlagShape> shapes;
  BundleSum ci;
  BundleSum source;
  BundleSum target;
  std::vector<std::vector<long>> twist;
};

/** Formal difference of bundle sums, used for Chern-class arithmetic only. */
struct VirtualSum {
  BundleSum plus, minus;
};

struct SectionLocus {
  Poly cls;
  long codim = 0;
  std::string description;
};

class DegeneracyLocus {
 public:
  explicit DegeneracyLocus(MorphismData m)
      : m_(std::move(m)), ops_(m_.shapes), ring_(m_.shapes), cc_(ring_) {
    e_ = long(ops_.rank(m_.source));
    f_ = long(ops_.rank(m_.target));
    if (f_ < 1 || e_ < f_)
      throw std::invalid_argument(
          "degeneracy locus needs source rank >= target rank >= 1");
    ci_rank_ = long(ops_.rank(m_.ci));
    base_dim_ = ops_.dim() - ci_rank_;
    codim_ = e_ - f_ + 1;
    if (codim_ > base_dim_)
      throw std::invalid_argument(
          "expected codimension exceeds the base dimension");
    dim_z_ = base_dim_ - codim_;
    BundleSum cid = ops_.dual(m_.ci);
    for (long j = 0; j <= ci_rank_; ++j) koszul_.push_back(ops_.wedge(j, cid));
  }

  DegeneracyLocus(const DegeneracyLocus&) = delete;
  DegeneracyLocus& operator=(const DegeneracyLocus&) = delete;

  const MorphismData& data() const { return m_; }
  const BundleOps& ops() const { return ops_; }
  const ChowRing& ring() const { return ring_; }
  long source_rank() const { return e_; }
  long target_rank() const { return f_; }
  long base_dim() const { return base_dim_; }
  long dim_z() const { return dim_z_; }

  /** Euler characteristic on the (restricted) base via the Koszul complex. */
  Int chi_base(const BundleSum& s) const {
    Int out = 0;
    for (long j = 0; j <= ci_rank_; ++j) {
      Int t = ops_.euler(ops_.tensor(koszul_[j], s));
      out += (j % 2 == 0) ? t : Int(-t);
    }
    return out;
  }

  /**
   * Terms of the Eagon-Northcott resolution of O_Z, position 0 first:
   * T_0 = O, T_j = Wedge^{f+j-1}(E) (x) Sym^{j-1}(F^v) (x) det(F)^v.
   */
  std::vector<BundleSum> en_terms() const {
    std::vector<BundleSum> t;
    t.push_back(ops_.unit_sum());
    BundleSum detdual = ops_.single(ops_.dual(ops_.det(m_.target)));
    BundleSum fdual = ops_.dual(m_.target);
    for (long j = 1; j <= e_ - f_ + 1; ++j)
      t.push_back(ops_.tensor(
          ops_.tensor(ops_.wedge(f_ + j - 1, m_.source), ops_.sym(j - 1, fdual)),
          detdual));
    return t;
  }

  /** Termwise dual of the resolution, listed in reversed order. */
  std::vector<BundleSum> en_dual_terms() const {
    std::vector<BundleSum> t = en_terms();
    std::vector<BundleSum> out;
    for (auto it = t.rbegin(); it != t.rend(); ++it) out.push_back(ops_.dual(*it));
    return out;
  }

  Int chi_z(long k) const {
    std::vector<BundleSum> t = en_terms();
    BundleSum tw = ops_.single(ops_.line(scaled_twist(k)));
    Int out = 0;
    for (long j = 0; j < (long)t.size(); ++j) {
      Int v = chi_base(ops_.tensor(t[j], tw));
      out += (j % 2 == 0) ? v : Int(-v);
    }
    return out;
  }

  HilbertPoly en_hilbert() const {
    std::vector<long> ks;
    for (long k = 0; k <= dim_z_ + 1; ++k) ks.push_back(k);
    return en_hilbert(ks);
  }

  HilbertPoly en_hilbert(const std::vector<long>& ks) const {
    if ((long)ks.size() < dim_z_ + 2)
      throw std::invalid_argument(
          "insufficient sample points for the expected degree");
    std::vector<Rat> xs, ys;
    for (long i = 0; i <= dim_z_; ++i) {
      xs.push_back(ks[i]);
      ys.push_back(Rat(chi_z(ks[i])));
    }
    HilbertPoly p{interpolate(xs, ys)};
    if (p.degree() != dim_z_)
      throw std::logic_error(
          "internal-consistency error (bug trap): interpolated degree "
          "differs from the expected locus dimension");
    for (long i = dim_z_ + 1; i < (long)ks.size(); ++i)
      if (p.eval(ks[i]) != Rat(chi_z(ks[i])))
        throw std::logic_error(
            "internal-consistency error (bug trap): extra sample point "
            "breaks the interpolation");
    if (!p.integer_valued(-3, 3))
      throw std::logic_error(
          "internal-consistency error (bug trap): Hilbert polynomial is "
          "not integer-valued");
    return p;
  }

  /**
   * Class of the locus where the morphism has rank <= r, as the size
   * e-r determinant det[ c_{f-r+j-i}(target - source) ].
   */
  Poly porteous(long r) const {
    if (r < 0 || r >= std::min(e_, f_))
      throw std::invalid_argument("target rank bound out of range");
    GradedClass ch = cc_.gc_sub(ch_sum(m_.target), ch_sum(m_.source));
    std::vector<Poly> c = cc_.chern_from_ch(ch, ring_.dim());
    auto at = [&](long i) -> Poly {
      if (i < 0 || i > ring_.dim()) return ring_.zero();
      return c[i];
    };
    long n = e_ - r;
    std::vector<std::vector<Poly>> mat(n, std::vector<Poly>(n));
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) mat[i][j] = at(f_ - r + j - i);
    return ring_.normal_form(det(mat));
  }

  /**
   * Vanishing class of the canonical section attached to the dualized
   * resolution: the locus where the presenting morphism is not surjective.
   */
  SectionLocus canonical_section_locus() const {
    SectionLocus out;
    out.cls = porteous(f_ - 1);
    out.codim = e_ - f_ + 1;
    if (out.cls.empty()) {
      out.description = "empty locus: the morphism is everywhere surjective";
      return out;
    }
    std::ostringstream os;
    os << "degeneracy locus of codimension " << out.codim;
    if (dim_z_ == 1) {
      std::vector<std::vector<long>> ones;
      for (auto& fl : m_.shapes) ones.emplace_back(fl.steps.size(), 1);
      Poly h = cc_.chern_from_ch(ch_sum(ops_.single(ops_.line(ones))), 1)[1];
      Rat deg = ring_.integrate(ring_.mul(ring_.mul(out.cls, h), ci_top()));
      os << ", a curve of degree " << deg;
      bool even = true;
      for (auto& [mo, cf] : ring_.normal_form(out.cls))
        if (!is_integer(cf / 2)) even = false;
      if (even && deg == 2)
        os << "; twice a line class (union of two disjoint lines candidate)";
    }
    out.description = os.str();
    return out;
  }

  Poly ci_top() const {
    Poly t = ring_.one();
    for (auto& [e, mult] : m_.ci) {
      long rk = long(ops_.rank(e));
      Poly c = rk > ring_.dim() ? ring_.zero()
                                : cc_.chern_from_ch(cc_.ch_irred(e), rk)[rk];
      for (Int i = 0; i < mult; ++i) t = ring_.mul(t, c);
    }
    return t;
  }

  GradedClass ch_sum(const BundleSum& s) const {
    GradedClass g = cc_.gc_zero();
    for (auto& [e, mult] : s)
      g = cc_.gc_add(g, cc_.gc_scale(cc_.ch_irred(e), Rat(mult)));
    return g;
  }

 private:
  std::vector<std::vector<long>> scaled_twist(long k) const {
    if ((long)m_.twist.size() != (long)m_.shapes.size())
      throw std::invalid_argument("twist needs one vector per factor");
    std::vector<std::vector<long>> s = m_.twist;
    for (auto& v : s)
      for (long& x : v) x *= k;
    return s;
  }

  static std::vector<Rat> poly_mul1(const std::vector<Rat>& a, const Rat& r,
                                    const Rat& s) {
    std::vector<Rat> out(a.size() + 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i) {
      out[i] += a[i] * s;
      out[i + 1] += a[i] * r;
    }
    return out;
  }

  static std::vector<Rat> interpolate(const std::vector<Rat>& xs,
                                      const std::vector<Rat>& ys) {
    std::vector<Rat> acc(xs.size(), Rat(0));
    for (size_t i = 0; i < xs.size(); ++i) {
      std::vector<Rat> basis{Rat(1)};
      Rat denom = 1;
      for (size_t j = 0; j < xs.size(); ++j) {
        if (j == i) continue;
        basis = poly_mul1(basis, 1, -xs[j]);
        denom *= xs[i] - xs[j];
      }
      for (size_t t = 0; t < basis.size(); ++t)
        acc[t] += basis[t] * ys[i] / denom;
    }
    return acc;
  }

  Poly det(const std::vector<std::vector<Poly>>& m) const {
    long n = (long)m.size();
    if (n == 1) return m[0][0];
    Poly out = ring_.zero();
    for (long i = 0; i < n; ++i) {
      if (m[i][0].empty()) continue;
      std::vector<std::vector<Poly>> minor;
      for (long r = 0; r < n; ++r) {
        if (r == i) continue;
        minor.emplace_back(m[r].begin() + 1, m[r].end());
      }
      Poly term = ring_.mul(m[i][0], det(minor));
      poly_axpy(out, term, i % 2 == 0 ? 1 : -1);
    }
    return out;
  }

  MorphismData m_;
  BundleOps ops_;
  ChowRing ring_;
  ChernCalc cc_;
  long e_ = 0, f_ = 0, ci_rank_ = 0, base_dim_ = 0, codim_ = 0, dim_z_ = 0;
  std::vector<BundleSum> koszul_;
};

/** A rank-3 net of conics on a base, with the discriminant twist K. */
struct ConicData {
  std::vector<FlagShape> shapes;
  BundleSum ci;
  VirtualSum e;
  std::vector<std::vector<long>> k;
};

struct ConicDiscriminant {
  Poly delta;
  Poly delta_sing;
  Rat delta_degree;
  Rat sing_count;
  bool has_count = false;
};

/**
 * Discriminant data of a conic bundle: the divisor of singular conics has
 * class 2c1 + 3k and its corank-2 locus 4(k^3 + 2k^2c1 + kc1^2 + kc2 +
 * c1c2 - c3); when the (restricted) base is a threefold the latter is
 * integrated to the count of ordinary double points.
 */
inline ConicDiscriminant conic_discriminant(const ConicData& d) {
  BundleOps ops(d.shapes);
  ChowRing ring(d.shapes);
  ChernCalc cc(ring);
  auto ch_sum = [&](const BundleSum& s) {
    GradedClass g = cc.gc_zero();
    for (auto& [e, mult] : s)
      g = cc.gc_add(g, cc.gc_scale(cc.ch_irred(e), Rat(mult)));
    return g;
  };
  GradedClass ch = cc.gc_sub(ch_sum(d.e.plus), ch_sum(d.e.minus));
  if (cc.gc_rank(ch) != 3)
    throw std::invalid_argument("conic-bundle data needs a net of rank 3");
  long cap = std::min<long>(3, ring.dim());
  std::vector<Poly> c = cc.chern_from_ch(ch, cap);
  c.resize(4, ring.zero());
  Poly k = cc.chern_from_ch(cc.ch_irred(ops.line(d.k)), 1)[1];

  ConicDiscriminant out;
  out.delta =
      ring.normal_form(ring.add(ring.scale(c[1], 2), ring.scale(k, 3)));
  Poly s = ring.mul(ring.mul(k, k), k);
  poly_axpy(s, ring.mul(ring.mul(k, k), c[1]), 2);
  poly_axpy(s, ring.mul(k, ring.mul(c[1], c[1])), 1);
  poly_axpy(s, ring.mul(k, c[2]), 1);
  poly_axpy(s, ring.mul(c[1], c[2]), 1);
  poly_axpy(s, c[3], -1);
  out.delta_sing = ring.normal_form(ring.scale(s, 4));

  Poly citop = ring.one();
  for (auto& [e, mult] : d.ci) {
    long rk = long(ops.rank(e));
    Poly top = rk > ring.dim()
                   ? ring.zero()
                   : cc.chern_from_ch(cc.ch_irred(e), rk)[rk];
    for (Int i = 0; i < mult; ++i) citop = ring.mul(citop, top);
  }
  long base_dim = ring.dim() - long(ops.rank(d.ci));
  std::vector<std::vector<long>> ones;
  for (auto& fl : d.shapes) ones.emplace_back(fl.steps.size(), 1);
  Poly h = cc.chern_from_ch(cc.ch_irred(ops.line(ones)), 1)[1];
  Poly hb = ring.one();
  for (long i = 0; i + 1 < base_dim; ++i) hb = ring.mul(hb, h);
  Rat denom = ring.integrate(ring.mul(ring.mul(hb, h), citop));
  if (denom == 0)
    throw std::logic_error(
        "internal-consistency error (bug trap): degenerate base volume");
  out.delta_degree =
      ring.integrate(ring.mul(ring.mul(out.delta, hb), citop)) / denom;
  if (base_dim == 3) {
    out.sing_count = ring.integrate(ring.mul(out.delta_sing, citop));
    out.has_count = true;
  }
  return out;
}

}  // namespace fzl
