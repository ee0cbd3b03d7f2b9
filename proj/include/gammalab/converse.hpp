#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gammalab/rankin.hpp"

namespace gammalab {

struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TwistKind { xi, tame, simple };

struct FingerprintEntry {
  TwistKind kind = TwistKind::tame;
  std::string twist;  // descriptor
  GammaMonomial gamma;
  int xi_index = -1;             // xi
  int tame_exp = 0, unif_k = 0;  // tame: lambda(varpi) = z_{m_lambda}^{unif_k}
  fq_t u = 0;                    // simple
  int phi_exp = 0, zeta_prime_k = 0;
};

struct Fingerprint {
  MiddleParams owner;
  std::vector<FingerprintEntry> entries;
  // Canonical serialization of the gamma values; equal keys mean equal fingerprints.
  std::string key(bool with_simple = true) const;
};

struct ConverseScope {
  int m_zeta = 8;    // zeta, zeta' in mu_{m_zeta}
  int m_lambda = 4;  // lambda(varpi) in mu_{m_lambda}
  IntegrationConfig cfg;
};

struct JiangCheck {
  std::string params, twist;
  bool ok = false;
  std::string translate;
};

// Caches the symbolic integrals per stratum, per simple stratum and per translate, and evaluates
// them for every parameter in scope.
class ConverseEngine {
 public:
  ConverseEngine(const Session& s, ConverseScope scope);

  const Session& session() const { return s_; }
  const ConverseScope& scope() const { return scope_; }
  // Every (f_bar, chi, zeta) with c_bar != 0 and f_bar irreducible, in a fixed order.
  std::vector<MiddleParams> family() const;
  // Middle parameters on the cached stratum of (c, d).
  MiddleParams params(fq_t c, fq_t d, int chi_exp, int zeta_k) const;
  SimpleParams simple(fq_t u, int phi_exp, int zeta_prime_k) const;
  const std::vector<QuasiCharacter>& xi() const { return xi_; }

  Fingerprint fingerprint(const MiddleParams& p) const;
  GammaResult tame_gamma(const MiddleParams& p, const QuasiCharacter& lambda) const;
  GammaResult xi_gamma(const MiddleParams& p, int xi_index) const;
  GammaResult simple_gamma(const MiddleParams& p, const SimpleParams& sp) const;
  JiangCheck jiang_check(const MiddleParams& p, int xi_index) const;

 private:
  struct StratumCache {
    std::shared_ptr<const MiddleStratum> stratum;
    SymPair tame;
    std::vector<std::vector<SymPair>> xi;  // per wild character, per default translate
    std::map<int, SymPair> simple;         // per u
  };
  const StratumCache& cache(const MiddleStratum& st) const;

  Session s_;
  ConverseScope scope_;
  std::vector<QuasiCharacter> xi_;
  std::map<int, std::shared_ptr<const SimpleStratum>> simple_strata_;
  std::map<std::pair<int, int>, std::shared_ptr<const MiddleStratum>> strata_;
  mutable std::mutex mu_;
  mutable std::map<const MiddleStratum*, std::unique_ptr<StratumCache>> caches_;
};

struct ZetaCbar {
  RootOfUnity zeta;
  fq_t c_bar = 0;
};
// zeta from the trivial twist (coefficient zeta^{-1} q), c_bar from lambda(-c^{-1} varpi^2) over all tame lambda.
ZetaCbar recover_zeta_and_cbar(const ConverseEngine& eng, const Fingerprint& fp);

struct DbarChi {
  fq_t d_bar = 0;
  FiniteMultChar chi;
};
// d_bar from the omega-dependence omega(-a u varpi^2) across phi; chi from chi(acu + a sigma_f) across u,
// read against the trivial-chi reference with the same (f_bar, zeta, u, phi, zeta').
DbarChi recover_dbar_and_chi(const ConverseEngine& eng, const Fingerprint& fp, const ZetaCbar& zc);

// Equal Xi_middle entries imply equal central characters; false marks a counterexample.
bool central_char_separation(const ConverseEngine& eng, const MiddleParams& a, const MiddleParams& b);

struct ConductorCheck {
  std::string params, twist;
  int f_psi = 0, f_abs = 0, expected_f_abs = 0;
  bool ok = false;
};
struct ConductorReport {
  std::vector<ConductorCheck> checks;
  bool min_poly_degrees_ok = false;  // middle degree 2, simple degree 1
  bool ok = false;
  std::string imported_bound;
};
ConductorReport conductor_separation_report(const ConverseEngine& eng);

struct TheoremReport {
  int q = 0, N = 0, precision = 0, m_zeta = 0;
  std::vector<Fingerprint> fingerprints;
  bool injective = false;
  std::vector<std::pair<std::string, std::string>> collisions;
  int ablation_collisions = 0;  // without the simple twists
  bool round_trip = false;
  std::vector<std::string> round_trip_failures;
  std::vector<JiangCheck> jiang_checks;
  ConductorReport conductor;

  std::string to_json() const;
  std::string to_csv() const;
};
TheoremReport theorem_main_experiment(const ConverseEngine& eng);

}  // namespace gammalab
