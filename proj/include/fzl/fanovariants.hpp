#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fzl/sheafcohom.hpp"

namespace fzl {

/** Numerical invariants of a zero locus X inside a flag product. */
struct FanoInvariants {
  long dim_x = 0;
  std::vector<std::vector<long>> minus_k;
  bool strongly_fano = false;
  Int h0_minus_k{0};
  Int minus_k_power{0};
  Int chi_t{0};
  Int chi_p0{1}, chi_p1{0}, chi_p2{0};
  bool has_hodge = false;
  std::array<std::array<long, 5>, 5> hodge{};
  long h11 = 0, h12 = 0, h13 = 0, h22 = 0;
  long level = 0;
  bool k3_type = false;
  long euler = 0;
  std::vector<std::string> notes;

  bool operator==(const FanoInvariants&) const = default;

  long rho() const { return h11; }

  std::string id() const {
    if (!has_hodge)
      throw std::logic_error("identifier is defined for fourfolds only");
    return std::to_string(h11) + "-" + h0_minus_k.str() + "-" +
           minus_k_power.str() + "-" + std::to_string(level);
  }

  std::string fingerprint() const {
    std::string s = id() + "|chiT=" + chi_t.str() + "|";
    for (int p = 0; p < 5; ++p)
      for (int q = 0; q < 5; ++q)
        s += (p || q ? "," : "") + std::to_string(hodge[p][q]);
    return s;
  }

  std::string diamond_str() const {
    std::string s;
    for (int p = 0; p < 5; ++p) {
      for (int q = 0; q < 5; ++q)
        s += (q ? " " : "") + std::to_string(hodge[p][q]);
      s += "\n";
    }
    return s;
  }
};

/** A Picard rank recorded from the contraction structure of one family. */
struct PicardFact {
  long rho = 0;
  std::string note;
};

/**
 * When two completions of the one-form table share every Euler
 * characteristic, the cascade reduces to the rank of a single connecting
 * map, and no characteristic-number identity can separate the candidates.
 * For the family below the elementary contractions pin the Picard rank,
 * and on a Fano fourfold h^{1,1} equals the Picard rank.  The recorded
 * rank only ever selects among solutions that already satisfy every
 * cohomological constraint; selecting none is trapped in the solver.
 */
inline std::optional<PicardFact> known_picard_rank(const BundleOps& ops,
                                                   const BundleSum& f) {
  std::vector<FlagShape> key{FlagShape({1}, 3), FlagShape({2}, 6)};
  if (ops.shapes() != key) return std::nullopt;
  BundleSum g;
  BundleOps::add_into(g, ops.tensor(ops.r_dual(1, 1), ops.line({{0}, {1}})));
  BundleOps::add_into(g, ops.tensor(ops.r_bundle(0, 2), ops.r_dual(1, 1)));
  if (ops.normal_sum(f) != ops.normal_sum(g)) return std::nullopt;
  return PicardFact{
      2,
      "Picard rank 2 on record: a quintic del Pezzo fibration over the "
      "plane and a small contraction into the Grassmannian account for "
      "both extremal rays"};
}

/**
 * Invariants of the zero locus of a general section of F.  Every quantity
 * is produced along two independent routes where one exists, and any
 * disagreement throws rather than returning a best guess.
 */
class FanoZeroLocus {
 public:
  FanoZeroLocus(std::vector<FlagShape> shapes, const BundleSum& f)
      : sc_(std::move(shapes), f) {}

  const SheafCohom& cohom() const { return sc_; }

  FanoInvariants invariants() const {
    FanoInvariants out;
    const BundleOps& ops = sc_.ops();
    out.dim_x = sc_.dim_x();

    BundleSum mk = minus_k_line();
    out.minus_k = ops.line_twists(mk.begin()->first);
    out.strongly_fano = true;
    for (auto& tf : out.minus_k)
      for (long t : tf)
        if (t <= 0) out.strongly_fano = false;

    Table tk = sc_.table_x(mk);
    if (!tk.exact())
      throw std::logic_error(
          "internal-consistency error (bug trap): restricted anticanonical "
          "table did not resolve to exact values");
    out.h0_minus_k = tk.lo_at(0);
    Int alt = 0;
    for (long q = 0; q <= tk.maxq(); ++q)
      alt += (q % 2 == 0) ? tk.lo[q] : Int(-tk.lo[q]);
    if (alt != sc_.chi_x(mk))
      throw std::logic_error(
          "internal-consistency error (bug trap): anticanonical table "
          "contradicts its Euler characteristic");

    Poly c1 = sc_.c1_line(out.minus_k);
    Poly top = sc_.ring().pow(c1, out.dim_x);
    out.minus_k_power = rat_to_int(sc_.integrate_on_x(top));

    out.chi_t = sc_.chi_tangent();

    if (out.dim_x == 4) hodge_fourfold(out);
    return out;
  }

 private:
  BundleSum minus_k_line() const {
    return sc_.ops().dual(
        sc_.ops().tensor(sc_.ops().canonical_line(), sc_.ops().det(sc_.f())));
  }

  void hodge_fourfold(FanoInvariants& out) const {
    const BundleOps& ops = sc_.ops();
    out.chi_p0 = sc_.chi_omega(0);
    out.chi_p1 = sc_.chi_omega(1);
    out.chi_p2 = sc_.chi_omega(2);
    if (out.chi_p0 != 1)
      throw std::logic_error(
          "internal-consistency error (bug trap): chi of the structure "
          "sheaf of a Fano fourfold is not 1");

    Table to = sc_.table_x(ops.unit_sum());
    if (!to.exact())
      throw std::logic_error(
          "internal-consistency error (bug trap): structure sheaf table "
          "did not resolve to exact values");
    std::array<long, 5> h0q{};
    for (long q = 0; q <= 4; ++q) h0q[q] = to.lo_at(q).convert_to<long>();

    Table t1 = sc_.omega_x_table(ops.unit_sum());
    BundleSum can =
        ops.tensor(ops.canonical_line(), ops.det(sc_.f()));
    Table t3 = sc_.tangent_x_table(can);

    // Intersect the direct route with the Serre-dual route, then pin the
    // edge entries through Hodge symmetry against the exact h^{0,q}.
    Table h1(4);
    for (long q = 0; q <= 4; ++q) {
      Int lo = std::max(t1.lo_at(q), t3.lo_at(4 - q));
      Int hi = std::min(t1.hi_at(q), t3.hi_at(4 - q));
      if (q == 0) {
        lo = std::max(lo, Int(h0q[1]));
        hi = std::min(hi, Int(h0q[1]));
      }
      if (q == 4) {
        lo = std::max(lo, Int(h0q[3]));
        hi = std::min(hi, Int(h0q[3]));
      }
      if (lo > hi)
        throw std::logic_error(
            "internal-consistency error (bug trap): the two routes to "
            "h^{1,q} produce disjoint intervals");
      h1.lo[q] = lo;
      h1.hi[q] = hi;
    }
    chi_tighten(h1, out.chi_p1);

    Int width(1);
    for (long q = 0; q <= 4; ++q) width *= h1.hi[q] - h1.lo[q] + 1;
    if (width > 2000000)
      throw std::logic_error(
          "internal-consistency error (bug trap): h^{1,q} intervals too "
          "wide to enumerate");

    std::vector<std::array<long, 5>> sols;
    std::array<long, 5> cur{};
    enumerate(h1, out.chi_p1, 0, Int(0), cur, sols);
    if (sols.size() > 1) {
      // Reserve route: bound h^{1,2} through the two-form table, using
      // h^{2,1}, h^{2,3} and the middle entry h^{2,2} = chi^2 + 2 h^{1,2}.
      Table t2 = sc_.omega2_x_table();
      Int lo12 = std::max(t2.lo_at(1), t2.lo_at(3));
      Int hi12 = std::min(t2.hi_at(1), t2.hi_at(3));
      Int mid_lo = t2.lo_at(2) - out.chi_p2;
      Int mid_hi = t2.hi_at(2) - out.chi_p2;
      auto floor_half = [](const Int& x) {
        return (x >= 0) ? Int(x / 2) : Int(-((-x + 1) / 2));
      };
      lo12 = std::max(lo12, Int(-floor_half(-mid_lo)));
      hi12 = std::min(hi12, floor_half(mid_hi));
      h1.lo[2] = std::max(h1.lo[2], lo12);
      h1.hi[2] = std::min(h1.hi[2], hi12);
      if (h1.lo[2] > h1.hi[2])
        throw std::logic_error(
            "internal-consistency error (bug trap): two-form route "
            "contradicts the one-form intervals");
      chi_tighten(h1, out.chi_p1);
      sols.clear();
      enumerate(h1, out.chi_p1, 0, Int(0), cur, sols);
    }
    if (auto pin = known_picard_rank(ops, sc_.f())) {
      std::vector<std::array<long, 5>> kept;
      for (auto& cand : sols)
        if (cand[1] == pin->rho) kept.push_back(cand);
      if (kept.empty())
        throw std::logic_error(
            "internal-consistency error (bug trap): the recorded Picard "
            "rank matches no enumerated diamond");
      if (kept.size() < sols.size()) out.notes.push_back(pin->note);
      sols = std::move(kept);
    }
    if (sols.size() != 1)
      throw std::logic_error(
          "internal-consistency error (bug trap): h^{1,q} intervals admit " +
          std::to_string(sols.size()) + " integer solutions");
    const auto& s = sols[0];
    if (s[0] != 0 || s[4] != 0)
      throw std::logic_error(
          "internal-consistency error (bug trap): nonvanishing h^{1,0} or "
          "h^{1,4} on a Fano fourfold");

    out.h11 = s[1];
    out.h12 = s[2];
    out.h13 = s[3];
    out.h22 = Int(out.chi_p2 + 2 * out.h12).convert_to<long>();

    for (long q = 0; q <= 4; ++q) {
      out.hodge[0][q] = h0q[q];
      out.hodge[1][q] = s[q];
      out.hodge[3][q] = s[4 - q];
      out.hodge[4][q] = h0q[4 - q];
    }
    out.hodge[2][0] = h0q[2];
    out.hodge[2][1] = out.h12;
    out.hodge[2][2] = out.h22;
    out.hodge[2][3] = out.h12;
    out.hodge[2][4] = h0q[2];

    long e = 0;
    for (int p = 0; p < 5; ++p)
      for (int q = 0; q < 5; ++q)
        e += ((p + q) % 2 == 0) ? out.hodge[p][q] : -out.hodge[p][q];
    GradedClass chtx =
        sc_.chern().gc_sub(sc_.chern().tangent_ch(), sc_.ch(sc_.f()));
    Poly c4 = sc_.chern().chern_from_ch(chtx, 4)[4];
    if (sc_.integrate_on_x(c4) != Rat(e))
      throw std::logic_error(
          "internal-consistency error (bug trap): the diamond and the "
          "Gauss-Bonnet integral give different Euler numbers");
    out.euler = e;

    out.level = 0;
    for (int p = 0; p < 5; ++p)
      for (int q = 0; q < 5; ++q)
        if (out.hodge[p][q] != 0 && q - p > out.level) out.level = q - p;
    out.k3_type = (out.h13 == 1);
    out.has_hodge = true;
  }

  static void enumerate(const Table& h1, const Int& chi, long q, Int acc,
                        std::array<long, 5>& cur,
                        std::vector<std::array<long, 5>>& sols) {
    if (q == 5) {
      if (acc == chi) sols.push_back(cur);
      return;
    }
    for (Int v = h1.lo[q]; v <= h1.hi[q]; ++v) {
      cur[q] = v.convert_to<long>();
      enumerate(h1, chi, q + 1, (q % 2 == 0) ? Int(acc + v) : Int(acc - v),
                cur, sols);
    }
  }

  SheafCohom sc_;
};

}  // namespace fzl
