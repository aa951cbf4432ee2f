#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "seifert/motion_group.hpp"

#include <cmath>

using namespace seifert;

namespace {

MotionElement random_element(oracle::Rng& rng) {
  return {ProjClass::from_matrix(oracle::random_sl2(rng)), static_cast<double>(oracle::uniform(rng, -3, 3)) +
                                                               oracle::uniform_real(rng, -0.5, 0.5)};
}

}  // namespace

TEST_CASE("representatives have det 1 and a positive leading entry") {
  Eigen::Matrix2d m;
  m << -4.0, 2.0, 1.0, -1.0;
  const ProjClass p = ProjClass::from_matrix(m);
  CHECK(p.matrix().determinant() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.matrix()(0, 0) > 0.0);
  m << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(ProjClass::from_matrix(m), std::domain_error);
}

TEST_CASE("from_normalized keeps stored representatives bit for bit") {
  oracle::Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const ProjClass p = ProjClass::from_matrix(oracle::random_sl2(rng));
    CHECK(ProjClass::from_normalized(p.matrix()).matrix() == p.matrix());
  }
}

TEST_CASE("classification by trace") {
  CHECK(classify(ProjClass::identity()) == ElementClass::Central);
  CHECK(classify(ProjClass::rotation(0.25)) == ElementClass::Elliptic);
  CHECK(classify(ProjClass::diagonal(2.0)) == ElementClass::Hyperbolic);
  Eigen::Matrix2d n;
  n << 1.0, 3.0, 0.0, 1.0;
  CHECK(classify(ProjClass::from_matrix(n)) == ElementClass::Parabolic);
  CHECK(classify(ProjClass::rotation(1.0)) == ElementClass::Central);
}

TEST_CASE("k(0.6) squared is (k(0.2), 1)") {
  CHECK(cocycle(ProjClass::rotation(0.6), ProjClass::rotation(0.6)) == 1);
  const MotionElement numeric(ProjClass::rotation(0.6), 0.0);
  const MotionElement sq = mot_mul(numeric, numeric);
  CHECK(distance(sq.proj(), ProjClass::rotation(0.2)) <= 1e-12);
  CHECK(sq.central_coord() == 1.0);

  const MotionElement exact = MotionElement::lifted_rotation(Rational::parse("3/5"));
  const MotionElement esq = mot_mul(exact, exact);
  REQUIRE(esq.exact_coords());
  CHECK(esq.exact_coords()->rotation == Rational::parse("1/5"));
  CHECK(esq.exact_coords()->central == Rational(1));
}

TEST_CASE("cocycle matches the swept-lift oracle") {
  oracle::Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const ProjClass a = ProjClass::from_matrix(oracle::random_sl2(rng));
    const ProjClass b = ProjClass::from_matrix(oracle::random_sl2(rng));
    CHECK(cocycle(a, b) == oracle::swept_cocycle(a.matrix(), b.matrix()));
  }
}

TEST_CASE("cocycle identity and associativity") {
  oracle::Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    const MotionElement a = random_element(rng), b = random_element(rng), c = random_element(rng);
    const auto& pa = a.proj();
    const auto& pb = b.proj();
    const auto& pc = c.proj();
    CHECK(cocycle(pa, pb) + cocycle(pa * pb, pc) == cocycle(pa, pb * pc) + cocycle(pb, pc));
    CHECK(approx_equal(mot_mul(mot_mul(a, b), c), mot_mul(a, mot_mul(b, c)), 1e-9));
  }
}

TEST_CASE("inverse and powers") {
  oracle::Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    const MotionElement a = random_element(rng);
    CHECK(approx_equal(mot_mul(a, mot_inv(a)), MotionElement::identity(), 1e-9));
    CHECK(approx_equal(mot_mul(mot_inv(a), a), MotionElement::identity(), 1e-9));
    const auto n = oracle::uniform(rng, -5, 5);
    MotionElement slow = MotionElement::identity();
    const MotionElement step = n < 0 ? mot_inv(a) : a;
    for (long long k = 0; k < std::abs(n); ++k) slow = mot_mul(slow, step);
    CHECK(approx_equal(mot_pow(a, n), slow, 1e-9));
  }
}

TEST_CASE("exact elements stay exact") {
  const MotionElement r = MotionElement::exact(Rational::parse("2/3"), Rational::parse("1/7"));
  const MotionElement cube = mot_pow(r, 3);
  REQUIRE(cube.exact_coords());
  CHECK(cube.exact_coords()->rotation == Rational(0));
  CHECK(cube.exact_coords()->central == Rational::parse("3/7") + Rational(2));
  const MotionElement back = mot_mul(r, mot_inv(r));
  REQUIRE(back.exact_coords());
  CHECK(back.exact_coords()->central == Rational(0));
}

TEST_CASE("central roots are exact") {
  oracle::Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const MotionElement f = MotionElement::central(oracle::uniform_real(rng, -50.0, 50.0));
    const auto m = oracle::uniform(rng, 1, 12);
    const MotionElement back = mot_pow(central_root(f, m), m);
    REQUIRE(back.exact_coords());
    CHECK(back.exact_coords()->central == f.exact_coords()->central);
    CHECK(back.exact_coords()->rotation == Rational(0));
  }
  CHECK_THROWS_AS(central_root(MotionElement(ProjClass::diagonal(2.0), 0.0), 2), std::invalid_argument);
  CHECK_THROWS_AS(central_root(MotionElement::central(1.0), 0), std::invalid_argument);
}

TEST_CASE("commutes agrees with comparing both products") {
  oracle::Rng rng(37);
  for (int i = 0; i < 400; ++i) {
    const MotionElement a = random_element(rng);
    MotionElement b = random_element(rng);
    if (i % 2 == 0) b = MotionElement(centralizer_family(a.proj(), oracle::uniform_real(rng, -1.5, 1.5)), 0.25);
    const MotionElement ab = mot_mul(a, b), ba = mot_mul(b, a);
    const bool oracle_commutes = approx_equal(ab, ba, 1e-9);
    CHECK(commutes(a, b) == oracle_commutes);
  }
}

TEST_CASE("centralizer family is a one-parameter subgroup") {
  oracle::Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    const ProjClass ref = ProjClass::from_matrix(oracle::random_sl2(rng));
    const double s = oracle::uniform_real(rng, -1.0, 1.0), t = oracle::uniform_real(rng, -1.0, 1.0);
    CHECK(distance(centralizer_family(ref, s) * centralizer_family(ref, t), centralizer_family(ref, s + t)) <= 1e-9);
    CHECK(commutes(ref, centralizer_family(ref, s)));
  }
  CHECK_THROWS_AS(centralizer_family(ProjClass::identity(), 1.0), std::invalid_argument);
}

TEST_CASE("commuting_product agrees with plain products on small exponents") {
  oracle::Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    const ProjClass axis = ProjClass::from_matrix(oracle::random_sl2(rng, 4.0));
    if (classify(axis) != ElementClass::Hyperbolic) continue;
    const MotionElement x(axis, oracle::uniform_real(rng, -2.0, 2.0));
    const MotionElement y(centralizer_family(axis, oracle::uniform_real(rng, -2.0, 2.0)),
                          static_cast<double>(oracle::uniform(rng, -2, 2)));
    const auto p = oracle::uniform(rng, -4, 4), q = oracle::uniform(rng, -4, 4);
    const MotionElement plain = mot_mul(mot_pow(x, p), mot_pow(y, q));
    CHECK(approx_equal(commuting_word(x, p, y, q), plain, 1e-9));
  }
}

TEST_CASE("commuting_product keeps accuracy where powers cancel") {
  const MotionElement h(ProjClass::diagonal(3.0), 0.0);
  const MotionElement w = commuting_word(h, 40, h, -39);
  CHECK(distance(w.proj(), h.proj()) <= 1e-12);
  CHECK(std::abs(w.central_coord() - h.central_coord()) <= 1e-12);
}

TEST_CASE("projective order") {
  CHECK(projective_order(MotionElement::exact(Rational::parse("3/8"), Rational(0)), 100) == ProjectiveOrder::finite(8));
  CHECK(projective_order(MotionElement(ProjClass::rotation(0.4), 0.0), 100) == ProjectiveOrder::finite(5));
  CHECK(projective_order(MotionElement(ProjClass::diagonal(1.5), 0.0), 100) == ProjectiveOrder::infinite());
  CHECK(projective_order(MotionElement::central(2.5), 100) == ProjectiveOrder::finite(1));
}
