#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <thread>
#include <vector>

#include "fzl/bundlecalc.hpp"
#include "fzl/chern.hpp"
#include "fzl/chowring.hpp"

using namespace fzl;

namespace {

GradedClass ch_sum(const ChernCalc& C, const BundleSum& s) {
  GradedClass g = C.gc_zero();
  for (auto& [e, m] : s)
    g = C.gc_add(g, C.gc_scale(C.ch_irred(e), Rat(m)));
  return g;
}

bool gc_eq(const ChowRing& R, const GradedClass& a, const GradedClass& b) {
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    Poly d = R.sub(a[i], b[i]);
    for (auto& [m, c] : d)
      if (c != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("subpartition enumeration") {
  auto subs = subpartitions({2, 1});
  CHECK(subs.size() == 5);
  CHECK(std::count(subs.begin(), subs.end(), Partition{}) == 1);
  CHECK(std::count(subs.begin(), subs.end(), Partition{2, 1}) == 1);
  CHECK(std::count(subs.begin(), subs.end(), Partition{1, 1}) == 1);
  CHECK(subpartitions({}).size() == 1);
  CHECK(subpartitions({3}).size() == 4);
}

TEST_CASE("builders, rank, dual, determinant") {
  BundleOps ops({proj_space(2), proj_space(5)});
  Irred q1 = ops.twist(ops.r_bundle(0, 2), {{0}, {1}});
  CHECK(ops.rank(q1) == 2);
  CHECK(ops.det(q1) == ops.line({{1}, {2}}));
  CHECK(ops.normal_form(ops.dual(ops.dual(q1))) == ops.normal_form(q1));
  CHECK(ops.rank(ops.canonical_line()) == 1);
  CHECK(ops.line_twists(ops.canonical_line()) ==
        std::vector<std::vector<long>>{{-3}, {-6}});

  BundleOps gr({grassmannian(2, 5)});
  CHECK(gr.det(gr.r_dual(0, 1)) == gr.line({{1}}));
  CHECK(gr.det(gr.r_bundle(0, 2)) == gr.line({{1}}));
  CHECK(gr.rank(gr.r_bundle(0, 2)) == 3);
  BundleSum twolines = BundleOps::add(gr.single(gr.line({{1}})),
                                      gr.single(gr.line({{2}})));
  CHECK(gr.det(twolines) == gr.line({{3}}));
  CHECK(gr.rank(twolines) == 2);
  CHECK_THROWS_AS(gr.line_twists(gr.r_dual(0, 1)), std::invalid_argument);

  BundleOps pg({proj_space(5), grassmannian(2, 8)});
  Irred mixed = ops.trivial();
  mixed = pg.trivial();
  mixed[0][1].back() = -1;
  mixed[1][0][0] = 1;
  CHECK(pg.rank(mixed) == 10);
  CHECK(pg.det(mixed) == pg.line({{2}, {5}}));
}

TEST_CASE("tensor products expand blockwise") {
  BundleOps ops({proj_space(2)});
  Irred q = ops.r_bundle(0, 2);
  BundleSum t = ops.tensor(q, ops.dual(q));
  Irred adj = ops.trivial();
  adj[0][1] = {1, -1};
  BundleSum expect{{ops.trivial(), Int(1)}, {ops.normal_form(adj), Int(1)}};
  CHECK(t == expect);
  CHECK(ops.rank(t) == 4);

  BundleOps gr({grassmannian(2, 4)});
  BundleSum e = BundleOps::add(gr.single(gr.line({{1}})),
                               gr.single(gr.r_dual(0, 1)));
  BundleSum sq = gr.tensor(e, e);
  CHECK(sq == BundleOps::add(gr.sym(2, e), gr.wedge(2, e)));
  BundleSum cube = gr.tensor(e, sq);
  BundleSum rhs = gr.schur({3}, e);
  BundleOps::add_into(rhs, gr.schur({2, 1}, e), 2);
  BundleOps::add_into(rhs, gr.schur({1, 1, 1}, e), 1);
  CHECK(cube == rhs);
  CHECK(gr.rank(cube) == 27);
}

TEST_CASE("exterior and symmetric power dispatch") {
  BundleOps gr25({grassmannian(2, 5)});
  CHECK(gr25.wedge_irred(2, gr25.r_dual(0, 1)) ==
        gr25.single(gr25.line({{1}})));
  CHECK(gr25.sym_irred(2, gr25.r_dual(0, 1)) ==
        gr25.single(gr25.schur_r_dual(0, 1, {2})));
  CHECK(gr25.wedge_irred(2, gr25.schur_r_dual(0, 1, {2})) ==
        gr25.single(gr25.schur_r_dual(0, 1, {3, 1})));

  BundleOps p5({proj_space(5)});
  BundleSum l2q = p5.wedge_irred(2, p5.r_bundle(0, 2));
  CHECK(l2q.size() == 1);
  CHECK(p5.rank(l2q) == 10);
  CHECK(p5.cohomology(l2q) == std::map<long, Int>{{0, Int(15)}});

  BundleOps gr36({grassmannian(3, 6)});
  Irred w2u = gr36.schur_r_dual(0, 1, {1, 1});
  CHECK(gr36.wedge_irred(3, w2u) == gr36.single(gr36.line({{2}})));
  CHECK(gr36.wedge_irred(2, w2u) ==
        gr36.single(gr36.schur_r_dual(0, 1, {2, 1, 1})));

  BundleOps two({grassmannian(2, 4), grassmannian(2, 5)});
  Irred uu = two.trivial();
  uu[0][0][0] = 1;
  uu[1][0][0] = 1;
  Irred t1 = two.trivial();
  t1[0][0] = {2, 0};
  t1[1][0] = {1, 1};
  Irred t2 = two.trivial();
  t2[0][0] = {1, 1};
  t2[1][0] = {2, 0};
  CHECK(two.wedge_irred(2, uu) ==
        BundleSum{{t1, Int(1)}, {t2, Int(1)}});
  BundleSum s2uu = two.sym_irred(2, uu);
  CHECK(s2uu.size() == 2);
  CHECK(two.rank(s2uu) == 10);

  BundleOps p2({proj_space(2)});
  BundleSum lines3{{p2.line({{1}}), Int(3)}};
  CHECK(p2.wedge(2, lines3) == BundleSum{{p2.line({{2}}), Int(3)}});
  CHECK(p2.wedge(3, lines3) == p2.single(p2.line({{3}})));
  BundleSum lines2{{p2.line({{1}}), Int(2)}};
  CHECK(p2.sym(2, lines2) == BundleSum{{p2.line({{2}}), Int(3)}});
  BundleSum en = BundleOps::add(BundleSum{{p2.line({{-1}}), Int(2)}},
                                p2.single(p2.line({{-2}})));
  CHECK(p2.wedge(3, en) == p2.single(p2.line({{-4}})));

  BundleOps gr24({grassmannian(2, 4)});
  BundleSum e = BundleOps::add(gr24.single(gr24.r_dual(0, 1)),
                               gr24.single(gr24.line({{1}})));
  CHECK(gr24.wedge(3, e) == gr24.single(gr24.det(e)));
  CHECK(gr24.tensor(e, gr24.wedge(2, e)) ==
        BundleOps::add(gr24.schur({2, 1}, e), gr24.wedge(3, e)));
}

TEST_CASE("wedge duality and rank identities") {
  std::mt19937 rng(414243);
  std::vector<std::vector<FlagShape>> spaces = {
      {grassmannian(2, 4)}, {proj_space(1), proj_space(2)}};
  for (auto& sh : spaces) {
    BundleOps ops(sh);
    std::vector<Irred> pool;
    for (long f = 0; f < ops.num_factors(); ++f) {
      pool.push_back(ops.r_dual(f, 1));
      pool.push_back(ops.r_bundle(f, sh[f].num_blocks()));
    }
    for (int rep = 0; rep < 12; ++rep) {
      std::vector<std::vector<long>> t;
      for (auto& fl : sh) {
        std::vector<long> v(fl.steps.size());
        for (auto& x : v) x = (long)(rng() % 3) - 1;
        t.push_back(v);
      }
      Irred a = ops.twist(pool[rng() % pool.size()], t);
      long r = ops.rank(a).convert_to<long>();
      for (long k = 0; k <= r; ++k) {
        BundleSum direct = ops.wedge_irred(k, a);
        BundleSum reflected = ops.tensor(
            ops.wedge_irred(r - k, ops.dual(a)), ops.single(ops.det(a)));
        CHECK(direct == reflected);
      }
      BundleSum e = ops.single(a);
      BundleOps::add_into(e, ops.single(pool[rng() % pool.size()]));
      Int re = ops.rank(e);
      for (long k = 0; k <= 4; ++k) {
        CHECK(ops.rank(ops.wedge(k, e)) == binomial(re, k));
        CHECK(ops.rank(ops.sym(k, e)) == binomial(Int(re + k - 1), k));
      }
    }
  }
}

TEST_CASE("exterior and symmetric powers match the character oracle") {
  std::mt19937 rng(20260815);
  std::vector<std::vector<FlagShape>> spaces = {
      {proj_space(3)},
      {grassmannian(2, 4)},
      {FlagShape({1, 2}, 4)},
      {proj_space(1), proj_space(2)}};
  for (auto& sh : spaces) {
    ChowRing R(sh);
    ChernCalc C(R);
    BundleOps ops(sh);
    std::vector<Irred> pool;
    for (long f = 0; f < ops.num_factors(); ++f) {
      long nb = sh[f].num_blocks();
      pool.push_back(ops.r_dual(f, 1));
      pool.push_back(ops.r_bundle(f, nb));
      long d = sh[f].block_rank(nb);
      if (d >= 3)
        pool.push_back(ops.schur_r_dual(f, nb, Partition(d - 1, 1)));
    }
    auto rnd_twist = [&]() {
      std::vector<std::vector<long>> t;
      for (auto& fl : sh) {
        std::vector<long> v(fl.steps.size());
        for (auto& x : v) x = (long)(rng() % 3) - 1;
        t.push_back(v);
      }
      return t;
    };
    for (int rep = 0; rep < 15; ++rep) {
      BundleSum e;
      long nsum = 1 + (long)(rng() % 3);
      for (long i = 0; i < nsum; ++i)
        BundleOps::add_into(
            e, ops.single(ops.twist(pool[rng() % pool.size()], rnd_twist())));
      GradedClass che = ch_sum(C, e);
      for (long k = 0; k <= 4; ++k) {
        BundleSum w = ops.wedge(k, e);
        BundleSum s = ops.sym(k, e);
        CHECK(gc_eq(R, ch_sum(C, w), C.wedge_ch(k, che)));
        CHECK(gc_eq(R, ch_sum(C, s), C.sym_ch(k, che)));
        CHECK(Rat(ops.euler(w)) == C.chi_ambient(ch_sum(C, w)));
      }
    }
  }
}

TEST_CASE("cotangent pieces") {
  BundleOps fl({FlagShape({1, 2}, 4)});
  auto pieces = fl.cotangent_graded();
  std::vector<long> ranks;
  for (auto& p : pieces) ranks.push_back(fl.rank(p).convert_to<long>());
  std::sort(ranks.begin(), ranks.end());
  CHECK(ranks == std::vector<long>{1, 2, 2});
  CHECK(fl.rank(fl.cotangent_sum()) == fl.dim());
  CHECK(fl.cohomology(fl.cotangent_sum()) == std::map<long, Int>{{1, Int(2)}});

  BundleOps pp({proj_space(2), proj_space(3)});
  CHECK(pp.rank(pp.cotangent_sum()) == 5);
  CHECK(pp.cohomology(pp.cotangent_sum()) == std::map<long, Int>{{1, Int(2)}});

  BundleOps gr({grassmannian(2, 5)});
  CHECK(gr.rank(gr.cotangent_sum()) == 6);
  CHECK(gr.cohomology(gr.cotangent_sum()) == std::map<long, Int>{{1, Int(1)}});
}

TEST_CASE("factorwise cohomology") {
  BundleOps ops({proj_space(2), proj_space(5)});
  Irred q1 = ops.twist(ops.r_bundle(0, 2), {{0}, {1}});
  CHECK(ops.cohomology(ops.single(q1)) == std::map<long, Int>{{0, Int(18)}});
  IrredCohom kan = ops.cohomology(ops.canonical_line());
  CHECK_FALSE(kan.acyclic);
  CHECK(kan.degree == 7);
  CHECK(kan.dim == 1);

  auto table = ops.cohomology(ops.single(q1));
  auto serre = ops.cohomology(
      ops.tensor(ops.dual(ops.single(q1)), ops.single(ops.canonical_line())));
  for (auto& [deg, d] : table) CHECK(serre[7 - deg] == d);
  for (auto& [deg, d] : serre) CHECK(table[7 - deg] == d);
}

TEST_CASE("unsupported plethysm is reported") {
  BundleOps gr25({grassmannian(2, 5)});
  CHECK_THROWS_WITH(gr25.wedge_irred(2, gr25.schur_r_dual(0, 1, {3})),
                    Catch::Matchers::ContainsSubstring("plethysm"));
  BundleOps gr48({grassmannian(4, 8)});
  CHECK_THROWS_WITH(gr48.wedge_irred(2, gr48.schur_r_dual(0, 1, {1, 1})),
                    Catch::Matchers::ContainsSubstring("plethysm"));
  BundleOps three(
      {grassmannian(2, 4), grassmannian(2, 4), grassmannian(2, 4)});
  Irred t = three.trivial();
  t[0][0][0] = 1;
  t[1][0][0] = 1;
  t[2][0][0] = 1;
  CHECK(three.wedge_irred(1, t) == three.single(t));
  CHECK_THROWS_WITH(three.wedge_irred(2, t),
                    Catch::Matchers::ContainsSubstring("plethysm"));
}

TEST_CASE("memoized dispatch is shareable across threads") {
  BundleOps ops({grassmannian(2, 5)});
  BundleSum e = BundleOps::add(ops.single(ops.r_dual(0, 1)),
                               ops.single(ops.r_bundle(0, 2)));
  BundleOps::add_into(e, ops.single(ops.line({{1}})));
  std::vector<BundleSum> results(8);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&, i] { results[i] = ops.wedge(3, e); });
  for (auto& th : threads) th.join();
  for (int i = 1; i < 8; ++i) CHECK(results[i] == results[0]);
  CHECK(ops.rank(results[0]) == binomial(Int(6), 3));
}
