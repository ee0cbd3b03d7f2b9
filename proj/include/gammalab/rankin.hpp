#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gammalab/whittaker.hpp"

namespace gammalab {

struct ZeroDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AllTranslatesVanish : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegrationConfig {
  int vmin = -6, vmax = 6;  // valuation window for the scalar part of h
  int unit_depth = 3;       // units modulo 1+P^m, matrices modulo U^m
  int x_ext = 1;            // y windows extend this many steps beyond the U^1 pattern
  int precision = 8;
  mpq_class gl_scale = 1;   // vol(GL(m, O))
  int jobs = 1;

  IntegrationConfig widened() const;
  std::string to_text() const;
};

// One monomial of an integral, before the parameters are substituted:
// w * sqrt(q)^{sqrt_odd} * X^xexp * z_m^root * zeta^zk * chi(g^ulog) * twist(varpi)^tk * twist_unit(g0^tlog).
struct SymKey {
  int xexp = 0, sqrt_odd = 0, zk = 0, ulog = 0, tk = 0, tlog = 0, root = 0;
  auto operator<=>(const SymKey&) const = default;
};

struct SymEval {
  int zeta_m = 0;              // m-exponent of zeta
  FiniteMultChar unit_char;    // chi on k_fbar^x
  int twist_unif_m = 0;        // m-exponent of the twist at varpi (or of zeta')
  FiniteMultChar twist_unit;   // twist on F_q^x
};

class SymIntegral {
 public:
  void add(const SymKey& k, const mpq_class& w);
  void merge(const SymIntegral& o);
  bool empty() const { return t_.empty(); }
  size_t size() const { return t_.size(); }
  const std::map<SymKey, mpq_class>& terms() const { return t_; }
  LaurentPoly evaluate(const Session& s, const SymEval& e) const;

 private:
  std::map<SymKey, mpq_class> t_;
};

struct CostMetrics {
  long cells = 0;
  long support_cells = 0;
};

// How the GL(1) twist enters the integrand.
struct Gl1Twist {
  bool symbolic = true;            // tame: recorded as (tk, tlog) keys
  std::optional<QuasiCharacter> chi;  // otherwise evaluated into the root
};

// Psi(s; R(g0) W, chi) with g0 = I + y0 E_{1,2}.
SymIntegral sym_psi_gl1(const MiddleStratum& st, const Gl1Twist& tw, const FieldElem& y0, const IntegrationConfig& cfg,
                        CostMetrics* cost = nullptr);
// Psi~(1-s; rho(w_{2N,1}) (R(g0) W)~, chi~) as a function of X = q^{-s}.
SymIntegral sym_psi_tilde_gl1(const MiddleStratum& st, const Gl1Twist& tw, const FieldElem& y0,
                              const IntegrationConfig& cfg, CostMetrics* cost = nullptr);
// Psi(s; R(g_u) W, W_{(u,phi,zeta')}) with the psi^{-1} model for the GL(N) factor.
SymIntegral sym_psi_glN(const MiddleStratum& st, const SimpleStratum& sst, const IntegrationConfig& cfg,
                        CostMetrics* cost = nullptr);
SymIntegral sym_psi_tilde_glN(const MiddleStratum& st, const SimpleStratum& sst, const IntegrationConfig& cfg,
                              CostMetrics* cost = nullptr);

SymEval sym_eval(const MiddleParams& p, const QuasiCharacter& lambda);
SymEval sym_eval(const MiddleParams& p, const SimpleParams& sp);

enum class SSide { s, one_minus_s };

RationalFnX psi_integral_gl1(SSide side, const MiddleParams& p, const QuasiCharacter& chi, const IntegrationConfig& cfg,
                             const FieldElem* y0 = nullptr);
RationalFnX psi_tilde_gl1(const MiddleParams& p, const QuasiCharacter& chi, const IntegrationConfig& cfg,
                          const FieldElem* y0 = nullptr);
RationalFnX psi_integral_glN(const MiddleParams& p, const SimpleParams& sp, const IntegrationConfig& cfg);
RationalFnX psi_tilde_glN(const MiddleParams& p, const SimpleParams& sp, const IntegrationConfig& cfg);

struct GammaResult {
  RationalFnX gamma, psi, psi_tilde;
  std::optional<GammaMonomial> monomial;
  std::optional<int> f_psi, f_abs;
  std::string translate;  // description of the Whittaker translate used
  CostMetrics cost;
};

// gamma = omega_2(-1)^{n-1} Psi~ / Psi; f_abs = f_psi + n m.
GammaResult assemble_gamma(const Session& s, const RationalFnX& psi, const RationalFnX& psi_tilde,
                           const Scalar& omega2_minus1, int n, int m);

GammaResult gamma(const MiddleParams& p, const QuasiCharacter& chi, const IntegrationConfig& cfg);
GammaResult gamma(const MiddleParams& p, const SimpleParams& sp, const IntegrationConfig& cfg);

// Default translates I + y0 E_{1,2}: y0 = -c_def and -c_def + 1 (0 and 1 for tame characters),
// then mu varpi^{-e}, 1 <= e <= level + 1. Psi != 0 needs y0 = -c_def mod P^{1-level}.
std::vector<FieldElem> default_translates(const Session& s, const QuasiCharacter& chi);
// First translate with Psi != 0 gives gamma; a second successful translate must agree.
GammaResult gamma_via_translates(const MiddleParams& p, const QuasiCharacter& chi, const std::vector<FieldElem>& y0s,
                                 const IntegrationConfig& cfg);

// Psi and Psi~ before parameter substitution, reusable across (chi, zeta) and (phi, zeta').
struct SymPair {
  SymIntegral psi, psi_tilde;
  std::string translate;
  CostMetrics cost;
};
SymPair sym_pair_gl1(const MiddleStratum& st, const Gl1Twist& tw, const FieldElem& y0, const IntegrationConfig& cfg);
SymPair sym_pair_glN(const MiddleStratum& st, const SimpleStratum& sst, const IntegrationConfig& cfg);
// Throws ZeroDenominator when Psi evaluates to zero.
GammaResult gamma_from_sym(const Session& s, const SymPair& pair, const SymEval& e, const Scalar& omega2_minus1, int m);

struct StabilizationReport {
  bool stable = false;
  std::string first_divergent;  // "" when stable
  std::string base_value, widened_value;
  CostMetrics base_cost, widened_cost;
};

// Re-runs with the window widened by 2, unit depth +1 and precision +4, one bound at a time.
StabilizationReport verify_stabilized_gl1(const MiddleParams& p, const QuasiCharacter& chi, const IntegrationConfig& cfg);
StabilizationReport verify_stabilized_glN(const MiddleParams& p, const SimpleParams& sp, const IntegrationConfig& cfg);

// Rebuild parameters over a session with different precision.
MiddleParams with_precision(const MiddleParams& p, int precision);
SimpleParams with_precision(const SimpleParams& p, int precision);

}  // namespace gammalab
