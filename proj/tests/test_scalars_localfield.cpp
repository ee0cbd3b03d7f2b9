#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace gammalab;

namespace {

Scalar random_scalar(std::mt19937& rng, const Ctx& C) {
  std::vector<mpq_class> co(static_cast<size_t>(C->phi()));
  for (auto& c : co) c = mpq_class(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3));
  for (auto& c : co) c.canonicalize();
  return Scalar(C, co);
}

}  // namespace

TEST_CASE("roots of unity") {
  const Session s = Session::make(3, 2);
  const Ctx& C = s.C;
  CHECK(Scalar::root_of_unity(C, 4, 0) == Scalar::one(C));
  CHECK(Scalar::root_of_unity(C, 4, 2) == -Scalar::one(C));
  CHECK(Scalar::root_of_unity(C, 8, 1) * Scalar::root_of_unity(C, 8, 7) == Scalar::one(C));
  CHECK(Scalar::root_of_unity(C, 3, 1).pow(3) == Scalar::one(C));
  CHECK_FALSE(Scalar::root_of_unity(C, 3, 1) == Scalar::one(C));
  CHECK_THROWS_AS(Scalar::root_of_unity(C, 7, 1), ConfigError);
}

TEST_CASE("sqrt q squares to q") {
  for (int q : {2, 3, 4, 5}) {
    const Session s = Session::make(q, 2);
    CHECK(Scalar::sqrt_q(s.C) * Scalar::sqrt_q(s.C) == Scalar(s.C, mpq_class(q)));
    CHECK(Scalar::half_power(s.C, 3) == Scalar::sqrt_q(s.C).pow(3));
  }
}

TEST_CASE("scalar ring axioms on random elements") {
  const Session s = Session::make(3, 2);
  std::mt19937 rng(11);
  for (int t = 0; t < 50; ++t) {
    const Scalar a = random_scalar(rng, s.C), b = random_scalar(rng, s.C), c = random_scalar(rng, s.C);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Scalar::zero(s.C));
    if (!a.is_zero()) CHECK(a * a.inverse() == Scalar::one(s.C));
    CHECK(Scalar::parse(s.C, a.to_text()) == a);
  }
}

TEST_CASE("as_monomial") {
  const Session s = Session::make(3, 2);
  const Scalar five(s.C, mpq_class(5));
  const auto m = as_monomial(RationalFnX::monomial(five, 3));
  REQUIRE(m);
  CHECK(m->coefficient == five);
  CHECK(m->degree == 3);
  CHECK(m->qs_degree() == -3);
  LaurentPoly xp1 = LaurentPoly::monomial(Scalar::one(s.C), 1) + LaurentPoly::monomial(Scalar::one(s.C), 0);
  CHECK_FALSE(as_monomial(RationalFnX(xp1)));
  CHECK_THROWS_AS(as_monomial(RationalFnX(LaurentPoly(s.C))), DomainError);
  std::mt19937 rng(3);
  for (int t = 0; t < 20; ++t) {
    Scalar c = random_scalar(rng, s.C);
    if (c.is_zero()) continue;
    const int e = static_cast<int>(rng() % 9) - 4;
    const auto r = as_monomial(RationalFnX::monomial(c, e));
    REQUIRE(r);
    CHECK(r->coefficient == c);
    CHECK(r->degree == e);
  }
}

TEST_CASE("rational functions reduce to lowest terms") {
  const Session s = Session::make(2, 2);
  const Scalar one = Scalar::one(s.C);
  const LaurentPoly a = LaurentPoly::monomial(one, 0) - LaurentPoly::monomial(one, 1);
  const LaurentPoly b = LaurentPoly::monomial(one, 0) + LaurentPoly::monomial(Scalar(s.C, mpq_class(2)), 1);
  const RationalFnX f(a * b, b);
  CHECK(f == RationalFnX(a));
  CHECK(f / f == RationalFnX::monomial(one, 0));
  CHECK(RationalFnX::parse(s.C, f.to_text()) == f);
  // X -> c/X twice is the identity.
  const Scalar c(s.C, mpq_class(1, 2));
  const RationalFnX g(a, b);
  CHECK(g.reflect(c).reflect(c) == g);
}

TEST_CASE("finite fields") {
  for (int q : {2, 3, 4, 5, 8, 9}) {
    FqContext F(q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        CHECK(F.add(static_cast<fq_t>(a), static_cast<fq_t>(b)) == F.add(static_cast<fq_t>(b), static_cast<fq_t>(a)));
        if (b) CHECK(F.mul(F.div(static_cast<fq_t>(a), static_cast<fq_t>(b)), static_cast<fq_t>(b)) == a);
      }
    for (int a = 1; a < q; ++a) CHECK(F.exp(F.log(static_cast<fq_t>(a))) == a);
    // Monic irreducible quadratics X^2 - dX - c number (q^2 - q)/2.
    int irr = 0;
    for (int c = 0; c < q; ++c)
      for (int d = 0; d < q; ++d) irr += Fq2Context::irreducible(F, static_cast<fq_t>(c), static_cast<fq_t>(d));
    CHECK(irr == (q * q - q) / 2);
  }
}

TEST_CASE("quadratic residue field") {
  FqContext F(3);
  Fq2Context K(F, 2, 0);  // X^2 + 1
  const auto x = Fq2Context::El{0, 1};
  CHECK(K.mul(x, x) == Fq2Context::El{2, 0});
  for (int i = 1; i < 9; ++i) {
    const auto e = K.from_index(i);
    CHECK(K.mul(e, K.inv(e)) == Fq2Context::El{1, 0});
    CHECK(K.exp(K.log(e)) == e);
  }
}

TEST_CASE("valuation and residue") {
  FqContext F(3);
  const FieldElem t2t3 = FieldElem::from_coeffs(&F, 2, {1, 1});
  CHECK(t2t3.val() == 2);
  const FieldElem zero6(&F, 6);
  CHECK_FALSE(zero6.val());
  CHECK(zero6.val_bound() == 6);
  const FieldElem one_plus_t = FieldElem::from_coeffs(&F, 0, {1, 1});
  CHECK(one_plus_t.inverse(8).val() == 0);
  CHECK(one_plus_t.residue() == 1);
  CHECK(FieldElem::monomial(&F, 1, 1).residue() == 0);
  const FieldElem two_t = FieldElem::from_coeffs(&F, 0, {2, 1});
  CHECK((two_t * two_t).residue() == 1);
  CHECK_THROWS_AS(FieldElem::monomial(&F, 1, -1).residue(), DomainError);
  CHECK_THROWS_AS(zero6.in_ideal(7), PrecisionError);
  CHECK(zero6.in_ideal(5));
}

TEST_CASE("valuation is additive and ultrametric") {
  FqContext F(2);
  const Session s = Session::make(2, 2);
  std::mt19937 rng(5);
  for (int t = 0; t < 500; ++t) {
    const FieldElem x = oracle::random_elem(rng, s, static_cast<int>(rng() % 5) - 2, 4, true);
    const FieldElem y = oracle::random_elem(rng, s, static_cast<int>(rng() % 5) - 2, 4, true);
    CHECK(*(x * y).val() == *x.val() + *y.val());
    const FieldElem z = x + y;
    if (*x.val() != *y.val()) CHECK(*z.val() == std::min(*x.val(), *y.val()));
    else CHECK(z.val_bound() >= *x.val());
  }
}

TEST_CASE("unit inverses to the documented precision") {
  const Session s = Session::make(3, 2);
  std::mt19937 rng(9);
  const FieldElem one = FieldElem::constant(s.f(), 1);
  for (int t = 0; t < 10000; ++t) {
    const FieldElem x = oracle::random_elem(rng, s, 0, 6, true);
    const FieldElem p = x * x.inverse(8);
    CHECK(p.agrees(one));
    CHECK(p.precision() >= 8);
  }
}
