#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace gammalab;

namespace {

MiddleParams params_with_lift(const MiddleParams& p, const MiddleLift& lift) {
  MiddleParams r = p;
  r.stratum = std::make_shared<const MiddleStratum>(p.stratum->session(), lift);
  return r;
}

}  // namespace

TEST_CASE("Lambda on distinguished elements") {
  for (int q : {2, 3}) {
    const Session s = Session::make(q, 2);
    const auto [c, d] = oracle::first_irreducible(s);
    const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 3});
    const MiddleStratum& st = *p.stratum;
    const Scalar zeta = p.zeta.value(s.C);
    CHECK(lambda_middle(p, st.beta()) == zeta);
    const Scalar chi_sigma = p.chi.value_at_log(s, st.residue_field().log({0, 1}));
    const LocalMatrix w = LocalMatrix::scalar(FieldElem::monomial(s.f(), 1, 1), 4);
    CHECK(lambda_middle(p, w) == zeta.pow(-s.N) * chi_sigma);
    CHECK(central_character(p).value(s, FieldElem::monomial(s.f(), 1, 1)) == zeta.pow(-s.N) * chi_sigma);
    CHECK(lambda_middle(p, LocalMatrix::identity(s.f(), 4)) == Scalar::one(s.C));
    // O_L units: chi(res(a0 c + a1 sigma)).
    for (int a0 = 0; a0 < q; ++a0)
      for (int a1 = 0; a1 < q; ++a1) {
        if (!a0 && !a1) continue;
        const LocalMatrix e = embed_OL(s, st.lift(), FieldElem::constant(s.f(), static_cast<fq_t>(a0)),
                                       FieldElem::constant(s.f(), static_cast<fq_t>(a1)));
        CHECK(lambda_middle(p, e) ==
              p.chi.value_at_log(s, st.residue_log(static_cast<fq_t>(a0), static_cast<fq_t>(a1))));
      }
    CHECK_THROWS_AS(lambda_middle(p, g_u(s, FieldElem::constant(s.f(), 1))), NotInGroup);
  }
}

TEST_CASE("Lambda is multiplicative on J~") {
  for (int q : {2, 3}) {
    const Session s = Session::make(q, 2);
    const auto [c, d] = oracle::first_irreducible(s);
    const MiddleParams p = make_middle(s, c, d, q * q - 2, RootOfUnity{8, 5});
    std::mt19937 rng(17);
    for (int t = 0; t < 500; ++t) {
      const LocalMatrix a = oracle::random_jtilde(rng, *p.stratum), b = oracle::random_jtilde(rng, *p.stratum);
      CHECK(lambda_middle(p, a * b) == lambda_middle(p, a) * lambda_middle(p, b));
    }
  }
}

TEST_CASE("psi_beta is a character of U^1") {
  const Session s = Session::make(3, 2);
  const auto [c, d] = oracle::first_irreducible(s);
  const MiddleParams p = make_middle(s, c, d, 0, RootOfUnity{1, 0});
  std::mt19937 rng(8);
  for (int t = 0; t < 1000; ++t) {
    const LocalMatrix x = oracle::random_unit_lattice(rng, s, p.stratum->u1());
    const LocalMatrix y = oracle::random_unit_lattice(rng, s, p.stratum->u1());
    const LocalMatrix& b = p.stratum->beta();
    CHECK(psi_beta(s, x * y, b) == psi_beta(s, x, b) * psi_beta(s, y, b));
  }
}

TEST_CASE("factorize_Jtilde recomposes") {
  const Session s = Session::make(3, 2);
  const auto [c, d] = oracle::first_irreducible(s);
  const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 1});
  const auto f0 = factorize_Jtilde(*p.stratum, LocalMatrix::identity(s.f(), 4));
  CHECK(f0.k == 0);
  std::mt19937 rng(2);
  for (int t = 0; t < 50; ++t) {
    const LocalMatrix h = oracle::random_jtilde(rng, *p.stratum);
    const auto f = factorize_Jtilde(*p.stratum, h);
    CHECK((f.u1_part * f.unit_part * p.stratum->beta_power(f.k)).agrees(h));
  }
}

TEST_CASE("simple family Lambda and central character") {
  const Session s = Session::make(3, 2);
  const SimpleParams sp = make_simple(s, 1, 1, RootOfUnity{8, 1});
  const Scalar zp = sp.zeta_prime.value(s.C);
  CHECK(lambda_simple(sp, sp.stratum->beta(), false) == zp);
  const LocalMatrix w = LocalMatrix::scalar(FieldElem::monomial(s.f(), 1, 1), 2);
  CHECK(lambda_simple(sp, w, false) == (zp.pow(2) * sp.phi.value_at_log(s, 0)).inverse());
  const CentralCharacter om = central_character(sp);
  const FqContext& F = *s.f();
  for (int a = 1; a < 3; ++a) {
    const fq_t au = F.mul(static_cast<fq_t>(a), sp.stratum->u_bar());
    const Scalar expect = sp.phi.value_at_log(s, F.log(au)) * (zp.pow(2) * sp.phi.value_at_log(s, F.log(sp.stratum->u_bar()))).pow(-2);
    CHECK(om.value(s, FieldElem::monomial(s.f(), au, 2)) == expect);
  }
  // psi^{-1} model on U^1(J_N): psi_F^{-1}(h_{0,1} + h_{1,0} / (u varpi)).
  std::mt19937 rng(6);
  for (int t = 0; t < 30; ++t) {
    const LocalMatrix h = oracle::random_unit_lattice(rng, s, radical_J(2, 1));
    const FieldElem arg = h.at(0, 1) + h.at(1, 0) * sp.stratum->u().inverse(8).shift(-1);
    CHECK(lambda_simple(sp, h, true) == psi_F(s, arg).inverse());
  }
}

TEST_CASE("central characters are trivial on 1 + P") {
  const Session s = Session::make(3, 2);
  std::mt19937 rng(12);
  for (int e = 0; e < 8; ++e) {
    const MiddleParams p = make_middle(s, 2, 0, e, RootOfUnity{8, e});
    const SimpleParams sp = make_simple(s, 2, e % 2, RootOfUnity{8, e});
    for (int t = 0; t < 10; ++t) {
      const FieldElem x = FieldElem::constant(s.f(), 1) + oracle::random_elem(rng, s, 1, 4);
      CHECK(central_character(p).value(s, x) == Scalar::one(s.C));
      CHECK(central_character(sp).value(s, x) == Scalar::one(s.C));
    }
  }
  const MiddleParams triv = make_middle(s, 2, 0, 0, RootOfUnity{1, 0});
  CHECK(central_character(triv).on_units.exponent == 0);
  CHECK(central_character(triv).at_uniformizer == 0);
}

TEST_CASE("minimal polynomials and depths") {
  const Session s = Session::make(3, 2);
  const MiddleParams p = make_middle(s, 2, 0, 1, RootOfUnity{8, 1});
  CHECK(stratum_min_poly(*p.stratum) == std::vector<fq_t>{1, 0, 1});
  const SimpleParams sp = make_simple(s, 1, 0, RootOfUnity{8, 0});
  CHECK(stratum_min_poly(*sp.stratum) == std::vector<fq_t>{2, 1});
  CHECK(depth_middle(2) == mpq_class(1, 2));
}

TEST_CASE("Lambda does not depend on the lift of f_bar") {
  for (int q : {2, 3}) {
    const Session s = Session::make(q, 2);
    const auto [c, d] = oracle::first_irreducible(s);
    const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 3});
    const FieldElem t = FieldElem::monomial(s.f(), 1, 1);
    const MiddleLift other{p.stratum->lift().c * (FieldElem::constant(s.f(), 1) + t), p.stratum->lift().d + t};
    const MiddleParams p2 = params_with_lift(p, other);
    std::mt19937 rng(31);
    for (int i = 0; i < 50; ++i) {
      const LocalMatrix h = oracle::random_jtilde(rng, *p.stratum, 2);
      CHECK(lambda_middle(p2, h) == lambda_middle(p, h));
    }
  }
}

TEST_CASE("Bessel average reproduces Lambda") {
  const Session s = Session::make(2, 2);
  const auto [c, d] = oracle::first_irreducible(s);
  const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 3});
  const auto reps = oracle::unit_coset_reps(s, radical_A2N(2, 1), radical_A2N(2, 2));
  CHECK(reps.size() == 256);
  CHECK(oracle::bessel_average(p, reps, LocalMatrix::identity(s.f(), 4)) == Scalar::one(s.C));
  std::mt19937 rng(41);
  for (int t = 0; t < 20; ++t) {
    const LocalMatrix g = oracle::random_jtilde(rng, *p.stratum);
    const Scalar jg = oracle::bessel_average(p, reps, g);
    CHECK(jg == lambda_middle(p, g));
    const LocalMatrix h = oracle::random_unit_lattice(rng, s, p.stratum->u1());
    const Scalar ph = psi_beta(s, h, p.stratum->beta());
    CHECK(oracle::bessel_average(p, reps, h * g) == ph * jg);
    CHECK(oracle::bessel_average(p, reps, g * h) == ph * jg);
  }
}

TEST_CASE("Whittaker transformation law") {
  for (int q : {2, 3}) {
    const Session s = Session::make(q, 2);
    const auto [c, d] = oracle::first_irreducible(s);
    const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 5});
    CHECK(whittaker_value(p, LocalMatrix::identity(s.f(), 4)) == Scalar::one(s.C));
    std::mt19937 rng(51);
    for (int t = 0; t < 60; ++t) {
      const LocalMatrix g = oracle::random_jtilde(rng, *p.stratum);
      const LocalMatrix u = oracle::random_upper(rng, s, 4, -2);
      CHECK(whittaker_value(p, u * g) == oracle::psi_n(s, u) * whittaker_value(p, g));
      CHECK(whittaker_value(p, g) == lambda_middle(p, g));
    }
    // Off the support: a unit diagonal entry outside 1 + P.
    if (q > 2) {
      std::vector<FieldElem> dg(4, FieldElem::constant(s.f(), 1));
      dg[0] = FieldElem::constant(s.f(), 2);
      CHECK(whittaker_value(p, LocalMatrix::diag(dg)).is_zero());
    }
    const SimpleParams sp = make_simple(s, 1, 0, RootOfUnity{8, 1});
    for (int t = 0; t < 30; ++t) {
      const LocalMatrix g = oracle::random_unit_lattice(rng, s, radical_J(2, 1)) * sp.stratum->beta_power(t % 3 - 1);
      const LocalMatrix u = oracle::random_upper(rng, s, 2, -2);
      for (int sign : {1, -1}) {
        const Scalar ps = sign > 0 ? oracle::psi_n(s, u) : oracle::psi_n(s, u).inverse();
        CHECK(whittaker_value(sp, u * g, sign) == ps * whittaker_value(sp, g, sign));
      }
    }
  }
}

TEST_CASE("contragredient argument is an involution") {
  const Session s = Session::make(3, 2);
  const auto [c, d] = oracle::first_irreducible(s);
  const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 5});
  std::mt19937 rng(61);
  CHECK(whittaker_value(p, tilde_argument(w_long(s.f(), 4), 8)) == Scalar::one(s.C));
  for (int t = 0; t < 20; ++t) {
    const LocalMatrix g = oracle::random_jtilde(rng, *p.stratum);
    CHECK(tilde_argument(tilde_argument(g, 8), 8).agrees(g));
    CHECK(whittaker_value(p, tilde_argument(tilde_argument(g, 8), 8)) == whittaker_value(p, g));
  }
}

TEST_CASE("support predicates against the membership oracle") {
  const Session s = Session::make(2, 2);
  const SuiteReport r = suite_lemmas(s, 40, 7, 1);
  for (const auto& c : r.checks) {
    INFO(c.anchor << " " << c.detail);
    CHECK(c.ok);
  }
  const auto [c, d] = oracle::first_irreducible(s);
  const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 3});
  const auto id = membership_oracle(*p.stratum, LocalMatrix::identity(s.f(), 4), -6, 6, 1);
  REQUIRE(id.size() == 1);
  CHECK(id[0].k == 0);
  // h = 1 is outside the GL(1) support.
  std::vector<FieldElem> x(2, FieldElem(s.f()));
  CHECK_FALSE(support_alpha_gl1(*p.stratum, FieldElem::constant(s.f(), 1), x));
  const FieldElem hinv = p.stratum->lift().c.inverse(8).shift(2);
  const auto hit = support_alpha_gl1(*p.stratum, hinv.inverse(8), x);
  REQUIRE(hit);
  CHECK(hit->k == -1);
}
