#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace gammalab;

TEST_CASE("additive character psi_F") {
  const Session s = Session::make(3, 2);
  const Scalar z3 = Scalar::root_of_unity(s.C, 3, 1);
  CHECK(psi_F(s, FieldElem::monomial(s.f(), 1, 1)) == Scalar::one(s.C));
  CHECK(psi_F(s, FieldElem::constant(s.f(), 1)) == z3);
  CHECK(psi_F(s, FieldElem::from_coeffs(s.f(), -1, {1, 1})) == z3);
  std::mt19937 rng(1);
  for (int t = 0; t < 200; ++t) {
    const FieldElem x = oracle::random_elem(rng, s, -3, 5), y = oracle::random_elem(rng, s, -3, 5);
    CHECK(psi_F(s, x + y) == psi_F(s, x) * psi_F(s, y));
    CHECK(psi_F(s, oracle::random_elem(rng, s, 1, 4)) == Scalar::one(s.C));
  }
}

TEST_CASE("Xi_middle members") {
  for (int q : {2, 3, 4}) {
    const Session s = Session::make(q, 2);
    const auto xi = build_xi_middle(s);
    REQUIRE(xi.size() == static_cast<size_t>(q + 1));
    int level2 = 0, level3 = 0;
    for (const auto& chi : xi) {
      CHECK(chi.detected_level(s) == chi.level());
      level2 += chi.level() == 2;
      level3 += chi.level() == 3;
      if (!chi.c_def()) {
        CHECK(chi.value(s, FieldElem::from_coeffs(s.f(), 0, {1, 1, 1})) == Scalar::one(s.C));
        continue;
      }
      // chi(1 + x) = psi(c x) on 1 + P^{floor(L/2)+1}.
      std::mt19937 rng(static_cast<unsigned>(q));
      for (int t = 0; t < 50; ++t) {
        const FieldElem x = oracle::random_elem(rng, s, chi.level() / 2 + 1, 5);
        CHECK(chi.value(s, FieldElem::constant(s.f(), 1) + x) == psi_F(s, *chi.c_def() * x));
      }
    }
    CHECK(level2 == q - 1);
    CHECK(level3 == 1);
  }
}

TEST_CASE("level-2 member at 1 + t^2") {
  const Session s = Session::make(3, 2);
  for (const auto& chi : build_xi_middle(s))
    if (chi.c_def() && chi.level() == 2 && chi.c_def()->identical(FieldElem::monomial(s.f(), 1, -2)))
      CHECK(chi.value(s, FieldElem::from_coeffs(s.f(), 0, {1, 0, 1})) == Scalar::root_of_unity(s.C, 3, 1));
}

TEST_CASE("quasi-characters are multiplicative") {
  for (int q : {2, 3}) {
    const Session s = Session::make(q, 2);
    std::vector<QuasiCharacter> chars = build_xi_middle(s);
    chars.push_back(QuasiCharacter::tame(s, q - 2, s.C->m() / 4));
    std::mt19937 rng(21);
    for (const auto& chi : chars)
      for (int t = 0; t < 2500; ++t) {
        const FieldElem x = oracle::random_elem(rng, s, static_cast<int>(rng() % 5) - 2, 6, true);
        const FieldElem y = oracle::random_elem(rng, s, static_cast<int>(rng() % 5) - 2, 6, true);
        CHECK(chi.value(s, x * y) == chi.value(s, x) * chi.value(s, y));
      }
  }
}

TEST_CASE("build_xi_d levels") {
  const Session s = Session::make(3, 2);
  for (auto [num, den] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}}) {
    const auto xs = build_xi_d(s, num, den);
    int l2 = 0, l3 = 0, l0 = 0;
    for (const auto& c : xs) (c.level() == 2 ? l2 : c.level() == 3 ? l3 : l0)++;
    CHECK(l2 == 2);
    CHECK(l3 == 1);
    CHECK(l0 == 1);
  }
}

TEST_CASE("Tate gamma agrees with the Gauss-sum formula") {
  for (int q : {2, 3}) {
    const Session s = Session::make(q, 2);
    std::vector<QuasiCharacter> chars;
    for (const auto& c : build_xi_middle(s))
      if (c.c_def()) chars.push_back(c);
    for (int e = 1; e < q - 1; ++e) chars.push_back(QuasiCharacter::tame(s, e, 0));
    for (const auto& chi : chars) {
      const RationalFnX g = tate_gamma(s, chi);
      CHECK(g == oracle::gauss_sum_gamma(s, chi));
      const auto m = as_monomial(g);
      REQUIRE(m);
      CHECK(m->degree == chi.conductor_exponent() - 1);
      // gamma(s, chi) gamma(1 - s, chi^{-1}) = chi(-1).
      const RationalFnX back = tate_gamma(s, chi.inverse()).reflect(Scalar(s.C, mpq_class(1, q)));
      CHECK(g * back == RationalFnX::monomial(chi.value(s, -FieldElem::constant(s.f(), 1)), 0));
    }
  }
}

TEST_CASE("Haar volumes") {
  const Session s = Session::make(3, 2);
  CHECK(vol_additive_ideal(s, 0) == Scalar::sqrt_q(s.C));
  CHECK(vol_additive_ideal(s, -1) == Scalar::half_power(s.C, 3));
  CHECK(vol_mult_units(s, 1) == Scalar(s.C, mpq_class(1, 2)));
  CHECK(gl_order(3, 2) == 48);
  // vol(1 + P^m) [1 + P : 1 + P^m] = vol(1 + P) for the radical filtration of A_{2N}.
  const Scalar one = Scalar::one(s.C);
  const Lattice p1 = radical_A2N(2, 1), p3 = radical_A2N(2, 3);
  const Scalar v1 = vol_unit_lattice(s, p1, one), v3 = vol_unit_lattice(s, p3, one);
  CHECK(v3 * Scalar(s.C, mpq_class(unit_index(3, p1, p3))) == v1);
  CHECK(unit_index(3, p1, radical_A2N(2, 2)) == 6561);
}

TEST_CASE("beta_f, sigma_f and the O_L embedding") {
  for (int q : {2, 3}) {
    const Session s = Session::make(q, 2);
    const auto [c, d] = oracle::first_irreducible(s);
    const MiddleLift f{FieldElem::constant(s.f(), c), FieldElem::constant(s.f(), d)};
    const LocalMatrix sg = sigma_f(s, f);
    CHECK((sg * sg).agrees(sg * LocalMatrix::scalar(f.d, 4) + LocalMatrix::scalar(f.c, 4)));
    const LocalMatrix id = LocalMatrix::identity(s.f(), 4);
    const FieldElem zero(s.f());
    CHECK(embed_OL(s, f, f.c.inverse(8), zero).agrees(id));
    CHECK(embed_OL(s, f, zero, FieldElem::constant(s.f(), 1)).agrees(sg));
    const LocalMatrix b = beta_f(s, f);
    CHECK((b * beta_f_inverse(s, f)).agrees(id));
    CHECK(in_lattice(b, radical_A2N(2, -1)));
    CHECK_FALSE(in_lattice(b, radical_A2N(2, 0)));
    CHECK(in_lattice(id, radical_A2N(2, 0)));
    // beta normalizes A_{2N} and U^m.
    std::mt19937 rng(4);
    for (int t = 0; t < 100; ++t) {
      const LocalMatrix x = oracle::random_unit_lattice(rng, s, radical_A2N(2, 2));
      CHECK(in_unit_lattice(b * x * beta_f_inverse(s, f), radical_A2N(2, 2)));
      const LocalMatrix y = oracle::random_unit_lattice(rng, s, radical_A2N(2, 2));
      CHECK(in_unit_lattice(x * y, radical_A2N(2, 2)));
    }
  }
}
