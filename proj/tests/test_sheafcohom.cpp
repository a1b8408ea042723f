#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "fzl/sheafcohom.hpp"

using namespace fzl;

namespace {

BundleSum lines(const BundleOps& ops,
                const std::vector<std::vector<std::vector<long>>>& tw) {
  BundleSum s;
  for (auto& t : tw) s[ops.line(t)] += 1;
  return s;
}

Irred random_irred(std::mt19937& rng, const BundleOps& ops) {
  std::uniform_int_distribution<long> entry(-3, 3);
  Irred e;
  for (auto& sh : ops.shapes()) {
    BlockWeight bw;
    for (long b = 1; b <= sh.num_blocks(); ++b) {
      std::vector<long> w(sh.block_rank(b));
      for (auto& x : w) x = entry(rng);
      std::sort(w.rbegin(), w.rend());
      bw.push_back(w);
    }
    e.push_back(bw);
  }
  return ops.normal_form(e);
}

}  // namespace

TEST_CASE("short exact sequence rules on the tautological sequence") {
  // 0 -> U -> O^3 -> Q -> 0 on P2.
  SheafCohom sc({proj_space(2)}, BundleSum{});
  const BundleOps& ops = sc.ops();

  BundleSum taut{{ops.r_bundle(0, 1), Int(1)}};
  BundleSum quot{{ops.r_bundle(0, 2), Int(1)}};

  Table a = sc.table_y(taut);
  Table b = exact_table(std::map<long, Int>{{0, 3}}, 2);
  Table c = sc.table_y(quot);
  CHECK(a.exact());
  CHECK(a.lo_at(0) == 0);
  CHECK(c.lo_at(0) == 3);

  Table c2 = ses_quot(a, b);
  CHECK(c2.exact());
  CHECK(c2.lo_at(0) == 3);
  CHECK(c2.lo_at(1) == 0);

  Table b2 = ses_mid(a, c);
  CHECK(b2.lo_at(0) <= 3);
  CHECK(b2.hi_at(0) >= 3);

  Table a2 = ses_sub(b, c);
  for (long q = 0; q <= 2; ++q) {
    CHECK(a2.lo_at(q) <= a.lo_at(q));
    CHECK(a2.hi_at(q) >= a.hi_at(q));
  }

  SECTION("tightening against the Euler characteristic") {
    Table t(1);
    t.lo = {Int(0), Int(0)};
    t.hi = {Int(5), Int(0)};
    chi_tighten(t, Int(3));
    CHECK(t.exact());
    CHECK(t.lo_at(0) == 3);

    Table bad(1);
    bad.hi = {Int(1), Int(0)};
    CHECK_THROWS_AS(chi_tighten(bad, Int(7)), std::logic_error);
  }
}

TEST_CASE("filtered cotangent tables on the ambient space") {
  SECTION("two-step flag") {
    SheafCohom sc({FlagShape({1, 2}, 4)}, BundleSum{});
    Table t = sc.table_y_filtered(sc.cotangent_filtered());
    CHECK(t.exact());
    CHECK(t.lo_at(1) == 2);
    for (long q = 0; q <= t.maxq(); ++q)
      if (q != 1) CHECK(t.hi_at(q) == 0);
  }

  SECTION("product of projective spaces") {
    SheafCohom sc({proj_space(2), proj_space(3)}, BundleSum{});
    Table t = sc.table_y_filtered(sc.cotangent_filtered());
    CHECK(t.exact());
    CHECK(t.lo_at(1) == 2);
  }

  SECTION("two-forms on projective three-space") {
    SheafCohom sc({proj_space(3)}, BundleSum{});
    Table t = sc.table_y_filtered(sc.wedge_cotangent(2));
    CHECK(t.exact());
    CHECK(t.lo_at(2) == 1);
  }

  SECTION("two-forms on the two-step flag") {
    SheafCohom sc({FlagShape({1, 2}, 4)}, BundleSum{});
    const Filtered& w2 = sc.wedge_cotangent(2);
    Int chi = 0;
    for (auto& piece : w2) chi += sc.ops().euler(piece);
    CHECK(chi == 3);
    Table t = sc.table_y_filtered(w2);
    CHECK(t.lo_at(2) <= 3);
    CHECK(t.hi_at(2) >= 3);
    CHECK(t.hi_at(0) == 0);
  }
}

TEST_CASE("ambient Euler characteristics agree along both routes") {
  std::vector<std::vector<FlagShape>> shapes;
  for (long n = 1; n <= 6; ++n) shapes.push_back({proj_space(n)});
  for (long n = 4; n <= 6; ++n) shapes.push_back({grassmannian(2, n)});
  shapes.push_back({FlagShape({1, 2}, 4)});

  std::mt19937 rng(20260815);
  for (auto& sh : shapes) {
    SheafCohom sc(sh, BundleSum{});
    for (int rep = 0; rep < 50; ++rep) {
      BundleSum e{{random_irred(rng, sc.ops()), Int(1)}};
      if (rep % 3 == 0) e[random_irred(rng, sc.ops())] += 1;
      Int chi = sc.chi_y(e);
      CHECK(chi == sc.ops().euler(e));
    }
  }

  SECTION("product factors through Kunneth") {
    SheafCohom sc({proj_space(1), proj_space(3)}, BundleSum{});
    for (int rep = 0; rep < 50; ++rep) {
      BundleSum e{{random_irred(rng, sc.ops()), Int(1)}};
      sc.chi_y(e);
    }
  }

  SECTION("empty subvariety bundle restricts to the identity") {
    SheafCohom sc({proj_space(3)}, BundleSum{});
    BundleSum e = lines(sc.ops(), {{{2}}});
    CHECK(sc.chi_x(e) == 10);
    CHECK(sc.chi_x(e) == sc.chi_y(e));
  }
}

TEST_CASE("restricted tables through the Koszul resolution") {
  SECTION("cubic fourfold") {
    SheafCohom sc({proj_space(5)}, lines(BundleOps({proj_space(5)}), {{{3}}}));
    CHECK(sc.dim_x() == 4);

    Table o = sc.table_x(sc.ops().unit_sum());
    CHECK(o.exact());
    CHECK(o.lo_at(0) == 1);
    for (long q = 1; q <= 4; ++q) CHECK(o.hi_at(q) == 0);

    Table mk = sc.table_x(lines(sc.ops(), {{{3}}}));
    CHECK(mk.exact());
    CHECK(mk.lo_at(0) == 55);

    Table can = sc.table_x(lines(sc.ops(), {{{-3}}}));
    CHECK(can.exact());
    CHECK(can.lo_at(4) == 1);
    CHECK(can.hi_at(0) == 0);
  }

  SECTION("genus ten prime fourfold") {
    std::vector<FlagShape> sh{grassmannian(2, 5)};
    SheafCohom sc(sh, lines(BundleOps(sh), {{{1}}, {{2}}}));
    CHECK(sc.dim_x() == 4);
    Table mk = sc.table_x(lines(sc.ops(), {{{2}}}));
    CHECK(mk.exact());
    CHECK(mk.lo_at(0) == 39);
    CHECK(sc.chi_x(sc.ops().unit_sum()) == 1);
  }

  SECTION("product ambient") {
    std::vector<FlagShape> sh{proj_space(1), grassmannian(2, 4)};
    SheafCohom sc(sh, lines(BundleOps(sh), {{{1}, {2}}}));
    CHECK(sc.dim_x() == 4);
    Table mk = sc.table_x(lines(sc.ops(), {{{1}, {2}}}));
    CHECK(mk.exact());
    CHECK(mk.lo_at(0) == 39);
  }
}

TEST_CASE("holomorphic forms on a cubic fourfold") {
  SheafCohom sc({proj_space(5)}, lines(BundleOps({proj_space(5)}), {{{3}}}));

  Table om = sc.omega_x_table(sc.ops().unit_sum());
  CHECK(om.exact());
  CHECK(om.lo_at(0) == 0);
  CHECK(om.lo_at(1) == 1);
  CHECK(om.lo_at(2) == 0);
  CHECK(om.lo_at(3) == 1);
  CHECK(om.lo_at(4) == 0);

  BundleSum canonical =
      sc.ops().tensor(sc.ops().canonical_line(), sc.ops().det(sc.f()));
  Table t3 = sc.tangent_x_table(canonical);
  CHECK(t3.exact());
  CHECK(t3.lo_at(1) == 1);
  CHECK(t3.lo_at(3) == 1);
  CHECK(t3.hi_at(0) == 0);
  CHECK(t3.hi_at(2) == 0);

  CHECK(sc.chi_tangent() == -20);
  CHECK(sc.chi_omega(0) == 1);
  CHECK(sc.chi_omega(1) == -2);
  CHECK(sc.chi_omega(2) == 21);
}

TEST_CASE("quartic surface intervals and exact chi") {
  SheafCohom sc({proj_space(3)}, lines(BundleOps({proj_space(3)}), {{{4}}}));
  CHECK(sc.dim_x() == 2);

  CHECK(sc.chi_omega(0) == 2);
  CHECK(sc.chi_omega(1) == -20);
  CHECK(sc.chi_omega(2) == 2);

  Table om = sc.omega_x_table(sc.ops().unit_sum());
  CHECK(om.exact_at(0));
  CHECK(om.lo_at(0) == 0);
  CHECK(om.lo_at(1) <= 20);
  CHECK(om.hi_at(1) >= 20);
}

TEST_CASE("tangent characteristics of classical fourfolds") {
  std::vector<FlagShape> sh{grassmannian(2, 5)};
  SheafCohom sc(sh, lines(BundleOps(sh), {{{1}}, {{2}}}));
  CHECK(sc.chi_tangent() == -24);
}
