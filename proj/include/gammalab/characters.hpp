#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gammalab/localfield.hpp"
#include "gammalab/scalars.hpp"
#include "gammalab/session.hpp"

namespace gammalab {

// Exponent r with psi_F(x) = z_m^r.
int psi_exponent(const Session& s, const FieldElem& x);
Scalar psi_F(const Session& s, const FieldElem& x);

// Character of F_q^x or k_fbar^x, value zeta_n^{e log_{g0}(x)}.
struct FiniteMultChar {
  int order = 1;  // group order n
  int exponent = 0;
  // m-exponent of the value at the element with discrete log l.
  int value_exp(const Session& s, long l) const;
  Scalar value_at_log(const Session& s, long l) const;
  FiniteMultChar inverse() const { return FiniteMultChar{order, (order - exponent) % order}; }
};

// Quasi-character of F^x = varpi^Z x F_q^x x (1+P).
class QuasiCharacter {
 public:
  // Tamely ramified: tame exponent on F_q^x, value z_m^{unif_root} at varpi.
  static QuasiCharacter tame(const Session& s, int tame_exp, int unif_root);
  // Level L >= 1: chi(1+x) = psi(c x) on 1 + P^{floor(L/2)+1}, extended to 1+P
  // by canonical p-th roots layer by layer; trivial tame part and chi(varpi) = 1.
  static QuasiCharacter wild(const Session& s, const FieldElem& c_def, int level);

  int level() const { return level_; }
  bool is_tame() const { return level_ == 0; }
  const std::optional<FieldElem>& c_def() const { return c_def_; }
  int tame_exp() const { return tame_exp_; }
  int unif_root() const { return unif_root_; }
  // Conductor exponent a: chi trivial on 1+P^a and a minimal.
  int conductor_exponent() const;
  // m-exponent of chi(x), x != 0.
  int value_exp(const Session& s, const FieldElem& x) const;
  Scalar value(const Session& s, const FieldElem& x) const;
  QuasiCharacter inverse() const;
  // Least L with chi trivial on 1+P^{L+1}, read off the stored table.
  int detected_level(const Session& s) const;
  std::string describe() const;

 private:
  int level_ = 0;
  int tame_exp_ = 0;
  int unif_root_ = 0;
  int q_ = 2;
  int m_ = 1;
  std::optional<FieldElem> c_def_;
  // m-exponents on (1+P)/(1+P^{L+1}) indexed by sum a_j q^{j-1}.
  std::shared_ptr<const std::vector<int>> wild_;
  int wild_sign_ = 1;
};

// Index of 1 + sum a_j t^j in (1+P)/(1+P^{L+1}).
int one_unit_index(const Session& s, const FieldElem& u, int L);

std::vector<QuasiCharacter> build_xi_middle(const Session& s);
// Levels ceil(2d+1) and ceil(2d+2), d = num/den.
std::vector<QuasiCharacter> build_xi_d(const Session& s, int num, int den);

// gamma(s, chi, psi_F) from Tate's local functional equation.
RationalFnX tate_gamma(const Session& s, const QuasiCharacter& chi);
// Zeta integrals Z(s, chi, f) and Z(1-s, chi^{-1}, f^) used by tate_gamma.
struct TateIntegrals {
  RationalFnX z_s, z_dual;
};
TateIntegrals tate_integrals(const Session& s, const QuasiCharacter& chi);

}  // namespace gammalab
