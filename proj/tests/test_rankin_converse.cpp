#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace gammalab;

namespace {

IntegrationConfig small_cfg() {
  IntegrationConfig cfg;
  cfg.vmin = -4;
  cfg.vmax = 4;
  cfg.unit_depth = 2;
  return cfg;
}

const ConverseEngine& engine_q2() {
  static const ConverseEngine eng(Session::make(2, 2), ConverseScope{});
  return eng;
}

Scalar corollary_coefficient(const Session& s, const MiddleParams& p, const QuasiCharacter& lam) {
  const FqContext& F = *s.f();
  const FieldElem arg = FieldElem::monomial(s.f(), F.neg(F.inv(p.stratum->c_bar())), 2);
  return p.zeta.value(s.C).inverse() * lam.value(s, arg) * Scalar(s.C, mpq_class(s.q()));
}

}  // namespace

TEST_CASE("tame twist: Psi is vol(1+P) on both sides") {
  for (int q : {2, 3}) {
    const Session s = Session::make(q, 2);
    const auto [c, d] = oracle::first_irreducible(s);
    const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 3});
    const RationalFnX vol = RationalFnX::monomial(Scalar(s.C, mpq_class(1, q - 1)), 0);
    for (int e = 0; e < q - 1; ++e) {
      const QuasiCharacter lam = QuasiCharacter::tame(s, e, s.C->m() / 4);
      CHECK(psi_integral_gl1(SSide::s, p, lam, small_cfg()) == vol);
      CHECK(psi_integral_gl1(SSide::one_minus_s, p, lam, small_cfg()) == vol);
    }
  }
}

TEST_CASE("tame twist: gamma closed form, degree and conductor") {
  for (int q : {2, 3}) {
    const Session s = Session::make(q, 2);
    const auto [c, d] = oracle::first_irreducible(s);
    for (int z : {0, 3}) {
      const MiddleParams p = make_middle(s, c, d, q, RootOfUnity{8, z});
      const QuasiCharacter lam = QuasiCharacter::tame(s, q - 2, s.C->m() / 2);
      const GammaResult g = gamma(p, lam, small_cfg());
      CHECK(g.gamma == RationalFnX::monomial(corollary_coefficient(s, p, lam), 2));
      REQUIRE(g.monomial);
      CHECK(g.monomial->qs_degree() == -2);
      CHECK(g.f_abs == 6);
    }
  }
}

TEST_CASE("simple twist: Psi volume and the frozen M = q^2 X^4") {
  const Session s = Session::make(2, 2);
  const auto [c, d] = oracle::first_irreducible(s);
  const MiddleParams p = make_middle(s, c, d, 2, RootOfUnity{8, 1});
  const SimpleParams sp = make_simple(s, 1, 0, RootOfUnity{8, 3});
  const Scalar one = Scalar::one(s.C);
  CHECK(psi_integral_glN(p, sp, small_cfg()) ==
        RationalFnX::monomial(vol_unit_lattice(s, radical_J(2, 1), one), 0));
  CHECK(vol_unit_lattice(s, radical_J(2, 1), one) == Scalar(s.C, mpq_class(1, 3)));
  const GammaResult g = gamma(p, sp, small_cfg());
  const FqContext& F = *s.f();
  const fq_t a = F.div(1, F.sub(F.add(c, d), 1));
  const Scalar pre = p.zeta.value(s.C).pow(-2) * p.chi.value_at_log(s, p.stratum->residue_log(a, a)) *
                     central_character(sp).value(s, FieldElem::monomial(s.f(), F.neg(a), 2));
  CHECK(g.gamma == RationalFnX::monomial(pre * Scalar(s.C, mpq_class(4)), 4));
  CHECK(g.f_abs == 12);
}

TEST_CASE("gamma does not depend on the GL(N) measure or the job count") {
  const Session s = Session::make(2, 2);
  const auto [c, d] = oracle::first_irreducible(s);
  const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 5});
  const SimpleParams sp = make_simple(s, 1, 0, RootOfUnity{8, 2});
  IntegrationConfig scaled = small_cfg(), threaded = small_cfg();
  scaled.gl_scale = 2;
  threaded.jobs = 3;
  const GammaResult base = gamma(p, sp, small_cfg());
  const GammaResult g2 = gamma(p, sp, scaled);
  CHECK(g2.gamma == base.gamma);
  CHECK(g2.psi == base.psi * Scalar(s.C, mpq_class(2)));
  CHECK(gamma(p, sp, threaded).gamma == base.gamma);
}

TEST_CASE("gamma does not depend on the lift of f_bar") {
  const Session s = Session::make(2, 2);
  const auto [c, d] = oracle::first_irreducible(s);
  const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 5});
  MiddleParams p2 = p;
  const FieldElem t = FieldElem::monomial(s.f(), 1, 1);
  p2.stratum = std::make_shared<const MiddleStratum>(
      s, MiddleLift{p.stratum->lift().c * (FieldElem::constant(s.f(), 1) + t), p.stratum->lift().d + t});
  const QuasiCharacter lam = QuasiCharacter::tame(s, 0, s.C->m() / 4);
  CHECK(gamma(p2, lam, small_cfg()).gamma == gamma(p, lam, small_cfg()).gamma);
  const SimpleParams sp = make_simple(s, 1, 0, RootOfUnity{8, 2});
  CHECK(gamma(p2, sp, small_cfg()).gamma == gamma(p, sp, small_cfg()).gamma);
}

TEST_CASE("translates for wild twists") {
  const Session s = Session::make(2, 2);
  const auto [c, d] = oracle::first_irreducible(s);
  const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 5});
  const auto xi = build_xi_middle(s);
  const QuasiCharacter& tame = xi.back();
  REQUIRE(tame.is_tame());
  const auto tt = default_translates(s, tame);
  REQUIRE(tt.size() >= 2);
  CHECK(tt[0].is_zero());
  for (const auto& chi : xi) {
    if (!chi.c_def()) continue;
    const auto ys = default_translates(s, chi);
    REQUIRE(ys.size() >= 2);
    CHECK(ys[0].identical(-*chi.c_def()));
    for (size_t i = 0; i < ys.size(); ++i)
      for (size_t j = i + 1; j < ys.size(); ++j) CHECK_FALSE(ys[i].identical(ys[j]));
    // The identity translate integrates chi over 1 + P and gives Psi = 0.
    CHECK_THROWS_AS(gamma(p, chi, IntegrationConfig{}), ZeroDenominator);
    CHECK_THROWS_AS(gamma_via_translates(p, chi, {FieldElem(s.f())}, IntegrationConfig{}), AllTranslatesVanish);
  }
}

TEST_CASE("stabilization detects a window that misses the support") {
  const Session s = Session::make(2, 2);
  const auto [c, d] = oracle::first_irreducible(s);
  const MiddleParams p = make_middle(s, c, d, 1, RootOfUnity{8, 5});
  const QuasiCharacter lam = QuasiCharacter::tame(s, 0, 0);
  CHECK(verify_stabilized_gl1(p, lam, small_cfg()).stable);
  IntegrationConfig narrow = small_cfg();
  narrow.vmin = narrow.vmax = 0;
  const StabilizationReport r = verify_stabilized_gl1(p, lam, narrow);
  CHECK_FALSE(r.stable);
  CHECK(r.first_divergent == "valuation_window");
}

TEST_CASE("engine agrees with direct integration") {
  const ConverseEngine& eng = engine_q2();
  const Session& s = eng.session();
  const MiddleParams p = eng.params(1, 1, 2, 6);
  const QuasiCharacter lam = QuasiCharacter::tame(s, 0, s.C->m() / 2);
  CHECK(eng.tame_gamma(p, lam).gamma == gamma(p, lam, eng.scope().cfg).gamma);
  const SimpleParams sp = eng.simple(1, 0, 7);
  CHECK(eng.simple_gamma(p, sp).gamma == gamma(p, sp, eng.scope().cfg).gamma);
  for (int i = 0; i < static_cast<int>(eng.xi().size()); ++i) CHECK(eng.jiang_check(p, i).ok);
}

TEST_CASE("family enumeration") {
  const ConverseEngine& eng = engine_q2();
  CHECK(eng.family().size() == 24);
  CHECK_THROWS_AS(eng.params(1, 0, 0, 0), DomainError);
}

TEST_CASE("recovery inverts the fingerprint") {
  const ConverseEngine& eng = engine_q2();
  for (const auto& p : {eng.params(1, 1, 0, 0), eng.params(1, 1, 2, 5)}) {
    const Fingerprint fp = eng.fingerprint(p);
    const ZetaCbar zc = recover_zeta_and_cbar(eng, fp);
    CHECK(zc.zeta == p.zeta);
    CHECK(zc.c_bar == p.stratum->c_bar());
    const DbarChi dc = recover_dbar_and_chi(eng, fp, zc);
    CHECK(dc.d_bar == p.stratum->d_bar());
    CHECK(dc.chi.exponent == p.chi.exponent);
  }
  CHECK(eng.fingerprint(eng.params(1, 1, 1, 0)).key() != eng.fingerprint(eng.params(1, 1, 2, 0)).key());
}

TEST_CASE("recovery rejects an inconsistent fingerprint") {
  const ConverseEngine& eng = engine_q2();
  Fingerprint fp = eng.fingerprint(eng.params(1, 1, 1, 2));
  for (auto& e : fp.entries)
    if (e.kind == TwistKind::tame && e.tame_exp == 0 && e.unif_k == 0)
      e.gamma.coefficient = e.gamma.coefficient * Scalar(eng.session().C, mpq_class(2));
  CHECK_THROWS_AS(recover_zeta_and_cbar(eng, fp), IntegrityError);
  Fingerprint no_simple = eng.fingerprint(eng.params(1, 1, 1, 2));
  std::erase_if(no_simple.entries, [](const FingerprintEntry& e) { return e.kind == TwistKind::simple; });
  CHECK_THROWS_AS(recover_dbar_and_chi(eng, no_simple, recover_zeta_and_cbar(eng, no_simple)), IntegrityError);
}

TEST_CASE("central characters separate through Xi_middle") {
  const ConverseEngine& eng = engine_q2();
  CHECK(central_char_separation(eng, eng.params(1, 1, 0, 0), eng.params(1, 1, 1, 3)));
  CHECK(central_char_separation(eng, eng.params(1, 1, 2, 4), eng.params(1, 1, 2, 4)));
}

TEST_CASE("theorem report serialization") {
  const ConverseEngine& eng = engine_q2();
  TheoremReport r;
  r.q = 2;
  r.N = 2;
  r.precision = 8;
  r.m_zeta = 8;
  r.fingerprints.push_back(eng.fingerprint(eng.params(1, 1, 0, 1)));
  r.injective = true;
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["schema_version"] == 1);
  CHECK(j["session"]["q"] == 2);
  CHECK(j["session"]["M_zeta"] == 8);
  CHECK(j["fingerprints"].size() == 1);
  CHECK(j["fingerprints"][0]["entries"].size() == r.fingerprints[0].entries.size());
  CHECK(j.contains("collisions"));
  CHECK(j.contains("jiang_checks"));
  CHECK(j.contains("conductor_checks"));
  CHECK(r.to_json() == r.to_json());
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("params,twist,coefficient,degree\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.fingerprints[0].entries.size()) + 1);
}
