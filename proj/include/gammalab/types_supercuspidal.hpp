#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gammalab/characters.hpp"
#include "gammalab/orders.hpp"

namespace gammalab {

struct NotInGroup : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// zeta_order^exp; order must divide the session's m.
struct RootOfUnity {
  int order = 1;
  int exp = 0;
  int m_exp(int m) const;
  Scalar value(const Ctx& C) const;
  std::string to_text() const;  // "order:exp"
  static RootOfUnity parse(const std::string& text);
  bool operator==(const RootOfUnity& o) const;
};

// Data of a middle stratum: everything that depends on (c, d) but not on (chi, zeta).
class MiddleStratum {
 public:
  struct UnitRep {
    Fq2Context::El residue;
    int log = 0;  // discrete log of the residue in k_fbar^x
    LocalMatrix j, j_inv;
  };

  // Throws DomainError("f̄ reducible over F_q") unless X^2 - dX - c is irreducible mod P.
  MiddleStratum(const Session& s, const MiddleLift& lift);

  const Session& session() const { return s_; }
  const MiddleLift& lift() const { return lift_; }
  fq_t c_bar() const { return kf_->c(); }
  fq_t d_bar() const { return kf_->d(); }
  const Fq2Context& residue_field() const { return *kf_; }
  const LocalMatrix& beta() const { return beta_; }
  // beta^k for |k| <= kMaxPower.
  const LocalMatrix& beta_power(int k) const;
  const std::vector<UnitRep>& unit_reps() const { return reps_; }
  const Lattice& u1() const { return u1_; }
  // val det beta_f.
  int beta_det_val() const { return -2; }
  // Exponent of psi_F(sign * tr(beta (y - 1))).
  int psi_beta_exp(const LocalMatrix& y, int sign = 1) const;
  // Discrete log of the residue of a0 c + a1 sigma_f.
  int residue_log(fq_t a0, fq_t a1) const;

  static constexpr int kMaxPower = 12;

 private:
  Session s_;
  MiddleLift lift_;
  std::shared_ptr<const Fq2Context> kf_;
  LocalMatrix beta_;
  std::vector<LocalMatrix> powers_;
  std::vector<UnitRep> reps_;
  Lattice u1_;
};

class SimpleStratum {
 public:
  SimpleStratum(const Session& s, const FieldElem& u);

  const Session& session() const { return s_; }
  const FieldElem& u() const { return u_; }
  fq_t u_bar() const { return u_.residue(); }
  const LocalMatrix& beta() const { return beta_; }
  const LocalMatrix& beta_power(int k) const;
  const Lattice& u1() const { return u1_; }
  int beta_det_val() const { return -1; }
  int psi_beta_exp(const LocalMatrix& y, int sign = 1) const;

  static constexpr int kMaxPower = 12;

 private:
  Session s_;
  FieldElem u_;
  LocalMatrix beta_;
  std::vector<LocalMatrix> powers_;
  Lattice u1_;
};

struct MiddleParams {
  std::shared_ptr<const MiddleStratum> stratum;
  FiniteMultChar chi;  // on k_fbar^x, relative to its canonical generator
  RootOfUnity zeta;
  std::string describe() const;
};

struct SimpleParams {
  std::shared_ptr<const SimpleStratum> stratum;
  FiniteMultChar phi;  // on F_q^x
  RootOfUnity zeta_prime;
  std::string describe() const;
};

MiddleParams make_middle(const Session& s, fq_t c, fq_t d, int chi_exp, RootOfUnity zeta);
SimpleParams make_simple(const Session& s, fq_t u, int phi_exp, RootOfUnity zeta_prime);

// Symbolic value z_m^{psi_root} * zeta^k * chi(g^{unit_log}) of Lambda on J~.
struct LambdaSym {
  int k = 0;
  int unit_log = 0;
  int psi_root = 0;
};

struct JtildeFactorization {
  int k = 0;
  LocalMatrix unit_part;  // a unit representative j0
  LocalMatrix u1_part;    // y in U^1 with h = y j0 beta^k
  LambdaSym sym;
};

// h = y * j0 * beta^k; throws NotInGroup otherwise.
JtildeFactorization factorize_Jtilde(const MiddleStratum& st, const LocalMatrix& h);
JtildeFactorization factorize_Jtilde(const SimpleStratum& st, const LocalMatrix& h, int sign = 1);

Scalar psi_beta(const Session& s, const LocalMatrix& x, const LocalMatrix& beta);

Scalar lambda_value(const Session& s, const MiddleParams& p, const LambdaSym& sym);
Scalar lambda_value(const Session& s, const SimpleParams& p, const LambdaSym& sym);
Scalar lambda_middle(const MiddleParams& p, const LocalMatrix& h);
Scalar lambda_simple(const SimpleParams& p, const LocalMatrix& h, bool conj);

struct CentralCharacter {
  FiniteMultChar on_units;  // order q - 1
  int at_uniformizer = 0;   // m-exponent of omega(varpi)
  int value_exp(const Session& s, const FieldElem& x) const;
  Scalar value(const Session& s, const FieldElem& x) const;
  bool operator==(const CentralCharacter& o) const {
    return on_units.exponent == o.on_units.exponent && at_uniformizer == o.at_uniformizer;
  }
};

CentralCharacter central_character(const MiddleParams& p);
CentralCharacter central_character(const SimpleParams& p);

// Characteristic polynomial of Y = beta^e varpi reduced mod P, low degree first.
std::vector<fq_t> stratum_char_poly(const MiddleStratum& st);
std::vector<fq_t> stratum_char_poly(const SimpleStratum& st);
// The irreducible polynomial whose power is the characteristic polynomial.
std::vector<fq_t> stratum_min_poly(const MiddleStratum& st);
std::vector<fq_t> stratum_min_poly(const SimpleStratum& st);
mpq_class depth_middle(int N);
mpq_class depth_simple(int n);

}  // namespace gammalab
