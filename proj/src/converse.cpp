#include "gammalab/converse.hpp"

#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace gammalab {

namespace {

int mod(long a, long n) {
  long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

GammaMonomial require_monomial(const GammaResult& g, const std::string& what) {
  if (!g.monomial) throw IntegrityError("gamma is not a monomial for " + what);
  return *g.monomial;
}

Scalar minus_one_value(const Session& s, const CentralCharacter& w) {
  return w.value(s, -FieldElem::constant(s.f(), 1));
}

std::string kind_text(TwistKind k) {
  switch (k) {
    case TwistKind::xi:
      return "xi";
    case TwistKind::tame:
      return "tame";
    case TwistKind::simple:
      return "simple";
  }
  return "";
}

}  // namespace

std::string Fingerprint::key(bool with_simple) const {
  std::ostringstream os;
  for (const auto& e : entries) {
    if (!with_simple && e.kind == TwistKind::simple) continue;
    os << e.twist << "=" << e.gamma.degree << ":" << e.gamma.coefficient.to_text() << ";";
  }
  return os.str();
}

// ---------------------------------------------------------------- engine

ConverseEngine::ConverseEngine(const Session& s, ConverseScope scope) : s_(s), scope_(std::move(scope)) {
  s_ = s_.with_precision(scope_.cfg.precision);
  xi_ = build_xi_middle(s_);
  const FqContext& F = *s_.f();
  for (int c = 1; c < s_.q(); ++c)
    for (int d = 0; d < s_.q(); ++d)
      if (Fq2Context::irreducible(F, static_cast<fq_t>(c), static_cast<fq_t>(d)))
        strata_[{c, d}] = make_middle(s_, static_cast<fq_t>(c), static_cast<fq_t>(d), 0, RootOfUnity{1, 0}).stratum;
  for (int u = 1; u < s_.q(); ++u) simple_strata_[u] = make_simple(s_, static_cast<fq_t>(u), 0, RootOfUnity{1, 0}).stratum;
}

MiddleParams ConverseEngine::params(fq_t c, fq_t d, int chi_exp, int zeta_k) const {
  auto it = strata_.find({c, d});
  if (it == strata_.end()) throw DomainError("f̄ reducible over F_q");
  const int q = s_.q();
  return MiddleParams{it->second, FiniteMultChar{q * q - 1, mod(chi_exp, q * q - 1)},
                      RootOfUnity{scope_.m_zeta, mod(zeta_k, scope_.m_zeta)}};
}

SimpleParams ConverseEngine::simple(fq_t u, int phi_exp, int zeta_prime_k) const {
  auto it = simple_strata_.find(u);
  if (it == simple_strata_.end()) throw DomainError("u must be a unit");
  return SimpleParams{it->second, FiniteMultChar{s_.q() - 1, mod(phi_exp, s_.q() - 1)},
                      RootOfUnity{scope_.m_zeta, mod(zeta_prime_k, scope_.m_zeta)}};
}

std::vector<MiddleParams> ConverseEngine::family() const {
  std::vector<MiddleParams> out;
  const int q = s_.q();
  for (const auto& [cd, st] : strata_)
    for (int chi = 0; chi < q * q - 1; ++chi)
      for (int z = 0; z < scope_.m_zeta; ++z)
        out.push_back(params(static_cast<fq_t>(cd.first), static_cast<fq_t>(cd.second), chi, z));
  return out;
}

const ConverseEngine::StratumCache& ConverseEngine::cache(const MiddleStratum& st) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = caches_.find(&st);
  if (it != caches_.end()) return *it->second;
  auto c = std::make_unique<StratumCache>();
  for (const auto& [cd, sp] : strata_)
    if (sp.get() == &st) c->stratum = sp;
  if (!c->stratum) throw std::logic_error("stratum not owned by this engine");
  const FieldElem zero(s_.f());
  c->tame = sym_pair_gl1(st, Gl1Twist{true, std::nullopt}, zero, scope_.cfg);
  for (const auto& chi : xi_) {
    std::vector<SymPair> per;
    if (!chi.is_tame())
      for (const auto& y0 : default_translates(s_, chi)) per.push_back(sym_pair_gl1(st, Gl1Twist{false, chi}, y0, scope_.cfg));
    c->xi.push_back(std::move(per));
  }
  for (const auto& [u, sst] : simple_strata_) c->simple[u] = sym_pair_glN(st, *sst, scope_.cfg);
  return *caches_.emplace(&st, std::move(c)).first->second;
}

GammaResult ConverseEngine::tame_gamma(const MiddleParams& p, const QuasiCharacter& lambda) const {
  const auto& c = cache(*p.stratum);
  return gamma_from_sym(s_, c.tame, sym_eval(p, lambda), lambda.value(s_, -FieldElem::constant(s_.f(), 1)), 1);
}

GammaResult ConverseEngine::xi_gamma(const MiddleParams& p, int xi_index) const {
  const QuasiCharacter& chi = xi_.at(static_cast<size_t>(xi_index));
  if (chi.is_tame()) return tame_gamma(p, chi);
  const auto& pairs = cache(*p.stratum).xi[static_cast<size_t>(xi_index)];
  const Scalar om = chi.value(s_, -FieldElem::constant(s_.f(), 1));
  const SymEval e = sym_eval(p, chi);
  std::optional<GammaResult> first;
  for (const auto& pair : pairs) {
    GammaResult g;
    try {
      g = gamma_from_sym(s_, pair, e, om, 1);
    } catch (const ZeroDenominator&) {
      continue;
    }
    if (!first) {
      first = g;
      continue;
    }
    if (!(g.gamma == first->gamma))
      throw IntegrityError("translates " + first->translate + " and " + g.translate + " disagree for " + p.describe());
    first->translate += ";checked " + g.translate;
    return *first;
  }
  if (!first) throw AllTranslatesVanish("Psi vanishes for every translate: " + chi.describe());
  return *first;
}

GammaResult ConverseEngine::simple_gamma(const MiddleParams& p, const SimpleParams& sp) const {
  const auto& c = cache(*p.stratum);
  const int u = sp.stratum->u_bar();
  return gamma_from_sym(s_, c.simple.at(u), sym_eval(p, sp), minus_one_value(s_, central_character(sp)), s_.N);
}

JiangCheck ConverseEngine::jiang_check(const MiddleParams& p, int xi_index) const {
  const QuasiCharacter& chi = xi_.at(static_cast<size_t>(xi_index));
  JiangCheck jc{p.describe(), chi.describe(), false, ""};
  if (!chi.c_def()) {
    // The unramified member: compared with the Corollary's closed form.
    GammaResult g = xi_gamma(p, xi_index);
    const FqContext& F = *s_.f();
    FieldElem arg = FieldElem::monomial(s_.f(), F.neg(F.inv(p.stratum->c_bar())), 2);
    Scalar cf = p.zeta.value(s_.C).inverse() * chi.value(s_, arg) * Scalar(s_.C, mpq_class(s_.q()));
    jc.ok = g.gamma == RationalFnX::monomial(cf, 2);
    jc.translate = g.translate;
    return jc;
  }
  GammaResult g = xi_gamma(p, xi_index);
  RationalFnX expect = tate_gamma(s_, chi).pow(2 * s_.N) * central_character(p).value(s_, *chi.c_def()).inverse();
  jc.ok = g.gamma == expect;
  jc.translate = g.translate;
  return jc;
}

Fingerprint ConverseEngine::fingerprint(const MiddleParams& p) const {
  Fingerprint fp;
  fp.owner = p;
  const int q = s_.q(), m = s_.C->m();
  for (int i = 0; i < static_cast<int>(xi_.size()); ++i) {
    FingerprintEntry e;
    e.kind = TwistKind::xi;
    e.xi_index = i;
    e.twist = "xi:" + xi_[static_cast<size_t>(i)].describe();
    e.gamma = require_monomial(xi_gamma(p, i), e.twist);
    fp.entries.push_back(e);
  }
  for (int t = 0; t < q - 1; ++t)
    for (int k = 0; k < scope_.m_lambda; ++k) {
      FingerprintEntry e;
      e.kind = TwistKind::tame;
      e.tame_exp = t;
      e.unif_k = k;
      QuasiCharacter lam = QuasiCharacter::tame(s_, t, k * (m / scope_.m_lambda));
      e.twist = "tame:" + lam.describe();
      e.gamma = require_monomial(tame_gamma(p, lam), e.twist);
      fp.entries.push_back(e);
    }
  for (const auto& [u, sst] : simple_strata_)
    for (int ph = 0; ph < q - 1; ++ph)
      for (int z = 0; z < scope_.m_zeta; ++z) {
        FingerprintEntry e;
        e.kind = TwistKind::simple;
        e.u = static_cast<fq_t>(u);
        e.phi_exp = ph;
        e.zeta_prime_k = z;
        SimpleParams sp = simple(static_cast<fq_t>(u), ph, z);
        e.twist = "simple:" + sp.describe();
        e.gamma = require_monomial(simple_gamma(p, sp), e.twist);
        fp.entries.push_back(e);
      }
  return fp;
}

// ---------------------------------------------------------------- recovery

ZetaCbar recover_zeta_and_cbar(const ConverseEngine& eng, const Fingerprint& fp) {
  const Session& s = eng.session();
  const int m = s.C->m(), q = s.q(), mz = eng.scope().m_zeta, ml = eng.scope().m_lambda;
  const FingerprintEntry* triv = nullptr;
  for (const auto& e : fp.entries)
    if (e.kind == TwistKind::tame && e.tame_exp == 0 && e.unif_k == 0) triv = &e;
  if (!triv) throw IntegrityError("fingerprint lacks the trivial twist");
  if (triv->gamma.degree != 2) throw IntegrityError("standard gamma factor is not of X-degree 2");
  const Scalar zinv = triv->gamma.coefficient * Scalar(s.C, mpq_class(1, q));
  ZetaCbar out;
  int found = 0;
  for (int k = 0; k < mz; ++k)
    if (Scalar::root_of_unity(s.C, mz, -k) == zinv) {
      out.zeta = RootOfUnity{mz, k};
      ++found;
    }
  if (found != 1) throw IntegrityError("zeta is not determined by the trivial twist");
  // lambda(-c^{-1} varpi^2) for every tame lambda; -c^{-1} is the unique x matching all of them.
  found = 0;
  for (int x = 1; x < q; ++x) {
    const FieldElem arg = FieldElem::monomial(s.f(), static_cast<fq_t>(x), 2);
    bool all = true;
    for (const auto& e : fp.entries) {
      if (e.kind != TwistKind::tame) continue;
      QuasiCharacter lam = QuasiCharacter::tame(s, e.tame_exp, e.unif_k * (m / ml));
      if (!(e.gamma.coefficient == triv->gamma.coefficient * lam.value(s, arg)) || e.gamma.degree != 2) {
        all = false;
        break;
      }
    }
    if (all) {
      out.c_bar = s.f()->neg(s.f()->inv(static_cast<fq_t>(x)));
      ++found;
    }
  }
  if (found != 1) throw IntegrityError("c_bar is not determined by the tame twists");
  return out;
}

DbarChi recover_dbar_and_chi(const ConverseEngine& eng, const Fingerprint& fp, const ZetaCbar& zc) {
  const Session& s = eng.session();
  const FqContext& F = *s.f();
  const int q = s.q();
  std::map<int, std::vector<const FingerprintEntry*>> by_u;
  for (const auto& e : fp.entries)
    if (e.kind == TwistKind::simple) by_u[e.u].push_back(&e);
  if (by_u.empty()) throw IntegrityError("fingerprint lacks the simple twists");
  // -a u from the omega(-a u varpi^2) dependence: ratios against (phi, zeta') = (0, 0) at the same u.
  std::map<int, fq_t> a_of_u;
  std::optional<fq_t> d_bar;
  for (const auto& [u, es] : by_u) {
    const FingerprintEntry* ref = nullptr;
    for (const auto* e : es)
      if (e->phi_exp == 0 && e->zeta_prime_k == 0) ref = e;
    if (!ref) throw IntegrityError("missing reference simple twist");
    const CentralCharacter wref = central_character(eng.simple(static_cast<fq_t>(u), 0, 0));
    int found = 0;
    fq_t xa = 0;
    for (int x = 1; x < q; ++x) {
      const FieldElem arg = FieldElem::monomial(s.f(), static_cast<fq_t>(x), 2);
      bool all = true;
      for (const auto* e : es) {
        const CentralCharacter w = central_character(eng.simple(static_cast<fq_t>(u), e->phi_exp, e->zeta_prime_k));
        if (!(e->gamma.coefficient * wref.value(s, arg) == ref->gamma.coefficient * w.value(s, arg))) {
          all = false;
          break;
        }
      }
      if (all) {
        xa = static_cast<fq_t>(x);
        ++found;
      }
    }
    if (found != 1) throw IntegrityError("a is not determined by the simple twists at u = " + std::to_string(u));
    const fq_t uu = static_cast<fq_t>(u);
    const fq_t a = F.neg(F.div(xa, uu));
    a_of_u[u] = a;
    // a = u / (c u^2 + d u - 1)  =>  d = (u/a + 1 - c u^2) / u
    const fq_t d = F.div(F.sub(F.add(F.div(uu, a), 1), F.mul(zc.c_bar, F.mul(uu, uu))), uu);
    if (d_bar && *d_bar != d) throw IntegrityError("d_bar differs between simple twists");
    d_bar = d;
  }
  DbarChi out;
  out.d_bar = *d_bar;
  // chi(a c u + a sigma_f) = gamma / gamma(trivial chi) with all other data equal.
  const MiddleParams ref = eng.params(zc.c_bar, out.d_bar, 0, zc.zeta.exp);
  const int order = q * q - 1;
  std::vector<std::pair<int, Scalar>> samples;
  for (const auto& [u, es] : by_u) {
    const FingerprintEntry* e0 = nullptr;
    for (const auto* e : es)
      if (e->phi_exp == 0 && e->zeta_prime_k == 0) e0 = e;
    GammaResult g = eng.simple_gamma(ref, eng.simple(static_cast<fq_t>(u), 0, 0));
    GammaMonomial gm = require_monomial(g, "reference");
    if (gm.degree != e0->gamma.degree) throw IntegrityError("simple twist degrees differ from the reference");
    const fq_t a = a_of_u[u];
    samples.emplace_back(ref.stratum->residue_log(F.mul(a, static_cast<fq_t>(u)), a), e0->gamma.coefficient / gm.coefficient);
  }
  int found = 0;
  for (int ex = 0; ex < order; ++ex) {
    FiniteMultChar c{order, ex};
    bool all = true;
    for (const auto& [lg, val] : samples)
      if (!(c.value_at_log(s, lg) == val)) {
        all = false;
        break;
      }
    if (all) {
      out.chi = c;
      ++found;
    }
  }
  if (found != 1) throw IntegrityError("chi is not determined by the simple twists (" + std::to_string(found) + " solutions)");
  return out;
}

bool central_char_separation(const ConverseEngine& eng, const MiddleParams& a, const MiddleParams& b) {
  bool same = true;
  for (int i = 0; i < static_cast<int>(eng.xi().size()) && same; ++i)
    same = eng.xi_gamma(a, i).gamma == eng.xi_gamma(b, i).gamma;
  return !same || central_character(a) == central_character(b);
}

ConductorReport conductor_separation_report(const ConverseEngine& eng) {
  const Session& s = eng.session();
  const int N = s.N, n = 2 * N, q = s.q();
  ConductorReport rep;
  rep.ok = true;
  const int middle_simple = 2 * N * N + 2 * N;  // 2N^2 (1 + 1/N)
  const int middle_tame = 2 * N + 2;
  bool degrees = true;
  std::set<const MiddleStratum*> seen;
  for (const auto& p : eng.family()) {
    if (!seen.insert(p.stratum.get()).second) continue;
    degrees = degrees && stratum_min_poly(*p.stratum).size() == 3;
    for (int u = 1; u < q; ++u) {
      SimpleParams sp = eng.simple(static_cast<fq_t>(u), 0, 0);
      degrees = degrees && stratum_min_poly(*sp.stratum).size() == 2;
      GammaResult g = eng.simple_gamma(p, sp);
      ConductorCheck c{p.describe(), sp.describe(), g.f_psi.value_or(-1), g.f_abs.value_or(-1), middle_simple, false};
      c.ok = g.f_abs && *g.f_abs == middle_simple && *g.f_psi == middle_simple - n * N;
      rep.ok = rep.ok && c.ok;
      rep.checks.push_back(c);
    }
    QuasiCharacter triv = QuasiCharacter::tame(s, 0, 0);
    GammaResult g = eng.tame_gamma(p, triv);
    ConductorCheck c{p.describe(), triv.describe(), g.f_psi.value_or(-1), g.f_abs.value_or(-1), middle_tame, false};
    c.ok = g.f_abs && *g.f_abs == middle_tame;
    rep.ok = rep.ok && c.ok;
    rep.checks.push_back(c);
  }
  rep.min_poly_degrees_ok = degrees;
  rep.ok = rep.ok && degrees;
  rep.imported_bound = "f(rho x pi^v) < " + std::to_string(middle_simple) +
                       " for rho not of middle type (imported, not computed)";
  return rep;
}

// ---------------------------------------------------------------- theorem experiment

TheoremReport theorem_main_experiment(const ConverseEngine& eng) {
  const Session& s = eng.session();
  TheoremReport rep;
  rep.q = s.q();
  rep.N = s.N;
  rep.precision = s.precision;
  rep.m_zeta = eng.scope().m_zeta;
  auto fam = eng.family();
  // Warm the per-stratum caches before fanning out.
  std::set<const MiddleStratum*> strata;
  for (const auto& p : fam)
    if (strata.insert(p.stratum.get()).second) eng.tame_gamma(p, QuasiCharacter::tame(s, 0, 0));
  rep.fingerprints.resize(fam.size());
  const int jobs = std::max(1, eng.scope().cfg.jobs);
  std::vector<std::exception_ptr> errors(static_cast<size_t>(jobs));
  auto worker = [&](int w) {
    try {
      for (size_t i = static_cast<size_t>(w); i < fam.size(); i += static_cast<size_t>(jobs))
        rep.fingerprints[i] = eng.fingerprint(fam[i]);
    } catch (...) {
      errors[static_cast<size_t>(w)] = std::current_exception();
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> ts;
    for (int w = 0; w < jobs; ++w) ts.emplace_back(worker, w);
    for (auto& t : ts) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::map<std::string, std::string> seen, seen_ablated;
  for (const auto& fp : rep.fingerprints) {
    auto [it, fresh] = seen.emplace(fp.key(), fp.owner.describe());
    if (!fresh) rep.collisions.emplace_back(it->second, fp.owner.describe());
    if (!seen_ablated.emplace(fp.key(false), fp.owner.describe()).second) ++rep.ablation_collisions;
  }
  rep.injective = rep.collisions.empty();

  rep.round_trip = true;
  for (const auto& fp : rep.fingerprints) {
    const MiddleParams& p = fp.owner;
    try {
      ZetaCbar zc = recover_zeta_and_cbar(eng, fp);
      DbarChi dc = recover_dbar_and_chi(eng, fp, zc);
      const bool ok = zc.zeta == p.zeta && zc.c_bar == p.stratum->c_bar() && dc.d_bar == p.stratum->d_bar() &&
                      dc.chi.exponent == p.chi.exponent;
      if (!ok) {
        rep.round_trip = false;
        rep.round_trip_failures.push_back(p.describe());
      }
    } catch (const IntegrityError& e) {
      rep.round_trip = false;
      rep.round_trip_failures.push_back(p.describe() + ": " + e.what());
    }
  }
  for (const auto& p : fam)
    for (int i = 0; i < static_cast<int>(eng.xi().size()); ++i) rep.jiang_checks.push_back(eng.jiang_check(p, i));
  rep.conductor = conductor_separation_report(eng);
  return rep;
}

std::string TheoremReport::to_json() const {
  using nlohmann::json;
  json j;
  j["schema_version"] = 1;
  j["session"] = {{"q", q}, {"N", N}, {"precision", precision}, {"M_zeta", m_zeta}};
  json fps = json::array();
  for (const auto& fp : fingerprints) {
    json entries = json::array();
    for (const auto& e : fp.entries)
      entries.push_back({{"kind", kind_text(e.kind)},
                         {"twist", e.twist},
                         {"coefficient", e.gamma.coefficient.to_text()},
                         {"degree", e.gamma.degree}});
    fps.push_back({{"params", fp.owner.describe()}, {"entries", entries}});
  }
  j["fingerprints"] = fps;
  j["injectivity"] = injective;
  json cols = json::array();
  for (const auto& [a, b] : collisions) cols.push_back({a, b});
  j["collisions"] = cols;
  j["ablation_collisions"] = ablation_collisions;
  j["round_trip"] = round_trip;
  j["round_trip_failures"] = round_trip_failures;
  json jc = json::array();
  for (const auto& c : jiang_checks)
    jc.push_back({{"params", c.params}, {"twist", c.twist}, {"ok", c.ok}, {"translate", c.translate}});
  j["jiang_checks"] = jc;
  json cc = json::array();
  for (const auto& c : conductor.checks)
    cc.push_back({{"params", c.params},
                  {"twist", c.twist},
                  {"f_psi", c.f_psi},
                  {"f_abs", c.f_abs},
                  {"expected_f_abs", c.expected_f_abs},
                  {"ok", c.ok}});
  j["conductor_checks"] = cc;
  j["min_poly_degrees_ok"] = conductor.min_poly_degrees_ok;
  j["imported_bound"] = conductor.imported_bound;
  return j.dump(2);
}

std::string TheoremReport::to_csv() const {
  std::ostringstream os;
  os << "params,twist,coefficient,degree\n";
  for (const auto& fp : fingerprints)
    for (const auto& e : fp.entries)
      os << '"' << fp.owner.describe() << "\",\"" << e.twist << "\",\"" << e.gamma.coefficient.to_text() << "\","
         << e.gamma.degree << "\n";
  return os.str();
}

}  // namespace gammalab
