#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "fzl/loci.hpp"

using namespace fzl;

namespace {

MorphismData trivial_to(const std::vector<FlagShape>& sh, long copies,
                        const BundleSum& target,
                        std::vector<std::vector<long>> twist) {
  BundleOps o(sh);
  MorphismData m;
  m.shapes = sh;
  m.source = BundleSum{{o.trivial(), Int(copies)}};
  m.target = target;
  m.twist = std::move(twist);
  return m;
}

std::vector<Rat> coeffs(const DegeneracyLocus& dl) {
  return dl.en_hilbert().coeff;
}

}  // namespace

TEST_CASE("linear sections of the tautological quotient cut a quintic curve") {
  std::vector<FlagShape> sh{proj_space(4)};
  BundleOps o(sh);
  DegeneracyLocus dl(
      trivial_to(sh, 6, o.single(o.twist(o.r_dual(0, 2), {{1}})), {{1}}));
  CHECK(dl.dim_z() == 1);
  CHECK(coeffs(dl) == std::vector<Rat>{5, 5});
  CHECK(dl.en_hilbert().str() == "5*k + 5");
}

TEST_CASE("conic curve from six sections against two dual subs") {
  std::vector<FlagShape> sh{grassmannian(2, 4)};
  BundleOps o(sh);
  DegeneracyLocus dl(
      trivial_to(sh, 6, BundleSum{{o.r_dual(0, 1), Int(2)}}, {{1}}));
  CHECK(coeffs(dl) == std::vector<Rat>{1, 2});

  SECTION("sampled values agree with the alternating chi sums") {
    HilbertPoly p = dl.en_hilbert();
    for (long k = -2; k <= 4; ++k) CHECK(p.eval(k) == Rat(dl.chi_z(k)));
  }
  SECTION("the quotient-side presentation gives the same curve") {
    DegeneracyLocus alt(trivial_to(
        sh, 6, BundleSum{{o.normal_form(o.r_bundle(0, 2)), Int(2)}}, {{1}}));
    CHECK(coeffs(alt) == std::vector<Rat>{1, 2});
  }
}

TEST_CASE("surface Hilbert polynomials from the resolution") {
  SECTION("six sections against duals plus a hyperplane") {
    std::vector<FlagShape> sh{grassmannian(2, 4)};
    BundleOps o(sh);
    DegeneracyLocus dl(trivial_to(
        sh, 6, BundleSum{{o.r_dual(0, 1), Int(2)}, {o.line({{1}}), Int(1)}},
        {{1}}));
    CHECK(coeffs(dl) == std::vector<Rat>{2, -1, 5});
  }
  SECTION("dual sub and a trivial summand against two twists") {
    std::vector<FlagShape> sh{grassmannian(2, 4)};
    BundleOps o(sh);
    MorphismData m;
    m.shapes = sh;
    m.source = BundleSum{{o.r_dual(0, 1), Int(1)}, {o.trivial(), Int(1)}};
    m.target = BundleSum{{o.line({{1}}), Int(1)}, {o.line({{2}}), Int(1)}};
    m.twist = {{1}};
    DegeneracyLocus dl(m);
    CHECK(coeffs(dl) == std::vector<Rat>{2, Rat(-1) / 2, Rat(9) / 2});
  }
  SECTION("restriction to a codimension-two linear section") {
    std::vector<FlagShape> sh{grassmannian(2, 5)};
    BundleOps o(sh);
    MorphismData m;
    m.shapes = sh;
    m.ci = BundleSum{{o.line({{1}}), Int(2)}};
    m.source = BundleSum{{o.trivial(), Int(4)}};
    m.target = BundleSum{{o.r_dual(0, 1), Int(1)}, {o.line({{1}}), Int(1)}};
    m.twist = {{1}};
    DegeneracyLocus dl(m);
    CHECK(dl.base_dim() == 4);
    CHECK(coeffs(dl) == std::vector<Rat>{2, Rat(-1) / 2, Rat(13) / 2});
  }
  SECTION("three sections against a linear and a quadric twist") {
    std::vector<FlagShape> sh{proj_space(4)};
    BundleOps o(sh);
    DegeneracyLocus dl(trivial_to(
        sh, 3, BundleSum{{o.line({{1}}), Int(1)}, {o.line({{2}}), Int(1)}},
        {{1}}));
    CHECK(coeffs(dl) == std::vector<Rat>{2, Rat(-1) / 2, Rat(7) / 2});
  }
  SECTION("twisted quotient source") {
    std::vector<FlagShape> sh{proj_space(4)};
    BundleOps o(sh);
    MorphismData m;
    m.shapes = sh;
    m.source = o.single(o.twist(o.r_bundle(0, 2), {{-1}}));
    m.target = BundleSum{{o.trivial(), Int(2)}, {o.line({{1}}), Int(1)}};
    m.twist = {{1}};
    DegeneracyLocus dl(m);
    CHECK(coeffs(dl) == std::vector<Rat>{2, -1, 4});
  }
  SECTION("bidegree divisor data on a product of planes") {
    std::vector<FlagShape> sh{proj_space(2), proj_space(2)};
    BundleOps o(sh);
    DegeneracyLocus dl(trivial_to(sh, 4,
                                  BundleSum{{o.line({{0}, {1}}), Int(1)},
                                            {o.line({{1}, {0}}), Int(1)},
                                            {o.line({{1}, {1}}), Int(1)}},
                                  {{1}, {1}}));
    CHECK(coeffs(dl) == std::vector<Rat>{2, -1, 8});
  }
  SECTION("threefold product base") {
    std::vector<FlagShape> sh{proj_space(1), proj_space(1), proj_space(2)};
    BundleOps o(sh);
    DegeneracyLocus dl(trivial_to(sh, 3,
                                  BundleSum{{o.line({{0}, {0}, {1}}), Int(1)},
                                            {o.line({{1}, {1}, {1}}), Int(1)}},
                                  {{1}, {1}, {1}}));
    CHECK(coeffs(dl) == std::vector<Rat>{2, 0, 10});
  }
}

TEST_CASE("resolution bookkeeping") {
  std::vector<FlagShape> sh{grassmannian(2, 4)};
  BundleOps o(sh);
  DegeneracyLocus dl(
      trivial_to(sh, 6, BundleSum{{o.r_dual(0, 1), Int(2)}}, {{1}}));

  SECTION("dualizing twice returns the original term list") {
    auto t = dl.en_terms();
    auto dd = dl.en_dual_terms();
    std::vector<BundleSum> back;
    for (auto it = dd.rbegin(); it != dd.rend(); ++it)
      back.push_back(o.dual(*it));
    CHECK(back == t);
  }
  SECTION("term count matches the expected codimension") {
    CHECK(dl.en_terms().size() == 4);
  }
  SECTION("too few sample points are rejected") {
    CHECK_THROWS_AS(dl.en_hilbert({0, 1}), std::invalid_argument);
  }
}

TEST_CASE("degeneracy class on the four dimensional Grassmannian") {
  std::vector<FlagShape> sh{grassmannian(2, 4)};
  BundleOps o(sh);
  ChowRing check_ring(sh);
  Poly two_s21 = check_ring.scale(
      check_ring.mul(check_ring.chern(0, 2, 1), check_ring.chern(0, 2, 2)), 2);

  DegeneracyLocus dl(
      trivial_to(sh, 6, BundleSum{{o.r_dual(0, 1), Int(2)}}, {{1}}));
  CHECK(dl.porteous(3) == check_ring.normal_form(two_s21));
  CHECK(check_ring.integrate(
            check_ring.mul(dl.porteous(3), check_ring.chern(0, 2, 1))) == 2);

  SECTION("section locus flags the two-line candidate") {
    SectionLocus sl = dl.canonical_section_locus();
    CHECK(sl.cls == check_ring.normal_form(two_s21));
    CHECK(sl.codim == 3);
    CHECK(sl.description.find("twice a line class") != std::string::npos);
  }
  SECTION("mixed dual-sub and quotient target gives the same locus") {
    DegeneracyLocus mixed(trivial_to(
        sh, 6,
        BundleSum{{o.r_dual(0, 1), Int(1)},
                  {o.normal_form(o.r_bundle(0, 2)), Int(1)}},
        {{1}}));
    SectionLocus sl = mixed.canonical_section_locus();
    CHECK(sl.cls == check_ring.normal_form(two_s21));
    CHECK(sl.description.find("twice a line class") != std::string::npos);
  }
}

TEST_CASE("surface class on a threefold product") {
  std::vector<FlagShape> sh{proj_space(1), proj_space(1), proj_space(2)};
  BundleOps o(sh);
  DegeneracyLocus dl(trivial_to(sh, 3,
                                BundleSum{{o.line({{0}, {0}, {1}}), Int(1)},
                                          {o.line({{1}, {1}, {1}}), Int(1)}},
                                {{1}, {1}, {1}}));
  ChowRing r(sh);
  Poly a = r.chern(0, 2, 1), b = r.chern(1, 2, 1), c = r.chern(2, 2, 1);
  Poly expected = r.scale(r.mul(a, b), 2);
  expected = r.add(expected, r.scale(r.mul(a, c), 3));
  expected = r.add(expected, r.scale(r.mul(b, c), 3));
  expected = r.add(expected, r.scale(r.mul(c, c), 3));
  CHECK(dl.porteous(1) == r.normal_form(expected));
}

TEST_CASE("degenerate and out of range classes vanish") {
  SECTION("equal source and target") {
    std::vector<FlagShape> sh{grassmannian(2, 4)};
    BundleOps o(sh);
    MorphismData m;
    m.shapes = sh;
    m.source = o.single(o.r_dual(0, 1));
    m.target = o.single(o.r_dual(0, 1));
    m.twist = {{0}};
    DegeneracyLocus dl(m);
    CHECK(dl.porteous(1).empty());
    CHECK(dl.canonical_section_locus().description.find("everywhere") !=
          std::string::npos);
  }
  SECTION("codimension beyond the base dimension") {
    std::vector<FlagShape> sh{proj_space(4)};
    BundleOps o(sh);
    DegeneracyLocus dl(trivial_to(
        sh, 5, BundleSum{{o.line({{1}}), Int(1)}, {o.line({{2}}), Int(1)}},
        {{1}}));
    CHECK(dl.porteous(0).empty());
  }
  SECTION("impossible expected codimension is rejected") {
    std::vector<FlagShape> sh{proj_space(2)};
    BundleOps o(sh);
    CHECK_THROWS_AS(
        DegeneracyLocus(trivial_to(
            sh, 8, BundleSum{{o.line({{1}}), Int(2)}, {o.trivial(), Int(2)}},
            {{1}})),
        std::invalid_argument);
  }
}

TEST_CASE("discriminants of conic bundles") {
  SECTION("quintic with sixteen nodes") {
    ConicData d;
    d.shapes = {proj_space(3)};
    BundleOps o(d.shapes);
    d.e.plus = BundleSum{{o.trivial(), Int(2)}, {o.line({{1}}), Int(1)}};
    d.k = {{1}};
    ConicDiscriminant r = conic_discriminant(d);
    CHECK(r.delta_degree == 5);
    REQUIRE(r.has_count);
    CHECK(r.sing_count == 16);
    ChowRing ring(d.shapes);
    CHECK(r.delta == ring.scale(ring.chern(0, 2, 1), 5));
  }
  SECTION("virtual net on projective threespace") {
    ConicData d;
    d.shapes = {proj_space(3)};
    BundleOps o(d.shapes);
    d.e.plus = BundleSum{{o.line({{1}}), Int(3)}, {o.trivial(), Int(1)}};
    d.e.minus = BundleSum{{o.line({{-1}}), Int(1)}};
    d.k = {{-1}};
    ConicDiscriminant r = conic_discriminant(d);
    CHECK(r.delta_degree == 5);
    REQUIRE(r.has_count);
    CHECK(r.sing_count == 16);
  }
  SECTION("quartic with twenty nodes on a hyperplane section") {
    ConicData d;
    d.shapes = {grassmannian(2, 4)};
    BundleOps o(d.shapes);
    d.ci = BundleSum{{o.line({{1}}), Int(1)}};
    d.e.plus = BundleSum{{o.r_dual(0, 1), Int(1)}, {o.trivial(), Int(2)}};
    d.e.minus = BundleSum{{o.line({{-1}}), Int(1)}};
    d.k = {{0}};
    ConicDiscriminant r = conic_discriminant(d);
    CHECK(r.delta_degree == 4);
    REQUIRE(r.has_count);
    CHECK(r.sing_count == 20);
  }
  SECTION("rank mismatch is rejected") {
    ConicData d;
    d.shapes = {proj_space(3)};
    BundleOps o(d.shapes);
    d.e.plus = BundleSum{{o.trivial(), Int(2)}};
    d.k = {{1}};
    CHECK_THROWS_AS(conic_discriminant(d), std::invalid_argument);
  }
}
