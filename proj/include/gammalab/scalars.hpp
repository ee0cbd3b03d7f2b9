#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gammalab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Q(zeta_m) in the power basis 1, z, ..., z^{phi(m)-1} modulo Phi_m.
// The formal S with S^2 = q is realized as the positive real sqrt(q), which
// always lies in Q(zeta_m) once 8 | m and 4p | m.
class CycloContext {
 public:
  CycloContext(int q, int p, int m);

  int q() const { return q_; }
  int p() const { return p_; }
  int m() const { return m_; }
  int phi() const { return phi_; }
  // z^k reduced mod Phi_m, k in [0, m).
  const std::vector<long>& power(int k) const { return pow_[static_cast<size_t>(k)]; }
  const std::vector<long>& cyclotomic_poly() const { return cyclo_; }
  const std::vector<mpq_class>& sqrt_q() const { return sqrtq_; }

 private:
  int q_, p_, m_, phi_;
  std::vector<long> cyclo_;
  std::vector<std::vector<long>> pow_;
  std::vector<mpq_class> sqrtq_;
};

using Ctx = std::shared_ptr<const CycloContext>;

// Smallest m admissible for a session: lcm(p^e, q^2-1, M_zeta, 8, 4p) where p^e
// is the exponent of (1+P)/(1+P^{L+1}) for the largest supported wild level L.
int session_cyclotomic_order(int q, int p, int m_zeta, int max_wild_level);
Ctx make_context(int q, int p, int m);

class Scalar {
 public:
  Scalar() = default;
  explicit Scalar(Ctx ctx);
  Scalar(Ctx ctx, const mpq_class& r);
  Scalar(Ctx ctx, std::vector<mpq_class> coeffs);

  static Scalar zero(const Ctx& c) { return Scalar(c); }
  static Scalar one(const Ctx& c) { return Scalar(c, mpq_class(1)); }
  static Scalar root_of_unity(const Ctx& c, int order, long exponent);
  static Scalar sqrt_q(const Ctx& c);
  // q^{k/2}
  static Scalar half_power(const Ctx& c, long k);
  // sum_k counts[k] * z^k for a length-m vector.
  static Scalar from_root_counts(const Ctx& c, const std::vector<mpq_class>& counts);

  const Ctx& ctx() const { return ctx_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  bool is_zero() const;
  bool is_rational() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator-() const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator*(const mpq_class& r) const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar inverse() const;
  Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }
  Scalar pow(long e) const;
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  // Exponent e with value == z_m^e, if the value is a root of unity.
  std::optional<int> root_exponent() const;

  // Canonical text form "h=0;[c0,c1,...]"; the parser accepts any h.
  std::string to_text() const;
  static Scalar parse(const Ctx& c, const std::string& text);

 private:
  void check(const Scalar& o) const;
  Ctx ctx_;
  std::vector<mpq_class> c_;
};

// Laurent polynomial in X = q^{-s}.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(Ctx c) : ctx_(std::move(c)) {}
  static LaurentPoly monomial(const Scalar& c, int e);

  const Ctx& ctx() const { return ctx_; }
  const std::map<int, Scalar>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int low_degree() const;
  int high_degree() const;
  Scalar coeff(int e) const;
  void add_term(int e, const Scalar& c);

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly operator*(const Scalar& s) const;
  LaurentPoly shift(int k) const;
  bool operator==(const LaurentPoly& o) const { return t_ == o.t_; }
  std::string to_text() const;
  static LaurentPoly parse(const Ctx& c, const std::string& text);

 private:
  Ctx ctx_;
  std::map<int, Scalar> t_;
};

struct GammaMonomial {
  Scalar coefficient;
  int degree = 0;
  // Exponent of q^{s}: the value is coefficient * q^{qs_degree * s}.
  int qs_degree() const { return -degree; }
  bool operator==(const GammaMonomial& o) const {
    return degree == o.degree && coefficient == o.coefficient;
  }
};

// num/den with den a polynomial whose constant term is 1 and gcd(num, den) = 1.
class RationalFnX {
 public:
  RationalFnX() = default;
  explicit RationalFnX(const LaurentPoly& num);
  RationalFnX(const LaurentPoly& num, const LaurentPoly& den);
  static RationalFnX monomial(const Scalar& c, int e);

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RationalFnX operator+(const RationalFnX& o) const;
  RationalFnX operator*(const RationalFnX& o) const;
  RationalFnX operator*(const Scalar& s) const;
  RationalFnX operator/(const RationalFnX& o) const;
  RationalFnX inverse() const;
  RationalFnX pow(int e) const;
  // f(X) -> f(c / X): the substitution s -> 1 - s sends X to q^{-1} X^{-1}.
  RationalFnX reflect(const Scalar& c) const;
  bool operator==(const RationalFnX& o) const { return num_ == o.num_ && den_ == o.den_; }
  std::string to_text() const;
  static RationalFnX parse(const Ctx& c, const std::string& text);

 private:
  void canonicalize();
  LaurentPoly num_, den_;
};

// Accumulates sum_j w_j * z_m^{r_j} * X^{e_j} with rational weights.
class RootSum {
 public:
  RootSum() = default;
  explicit RootSum(Ctx c) : ctx_(std::move(c)) {}
  void add(int xexp, int root, const mpq_class& w);
  void merge(const RootSum& o);
  LaurentPoly to_poly() const;
  bool empty() const { return acc_.empty(); }

 private:
  Ctx ctx_;
  std::map<int, std::vector<mpq_class>> acc_;
};

// Throws DomainError on f == 0.
std::optional<GammaMonomial> as_monomial(const RationalFnX& f);

std::string rational_text(const mpq_class& r);

}  // namespace gammalab
