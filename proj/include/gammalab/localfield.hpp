#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gammalab {

struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using fq_t = std::uint8_t;

// F_q = F_p[y]/(m(y)) with m the first primitive polynomial in lexicographic
// order; element index = sum c_i p^i. Tables are immutable after construction.
class FqContext {
 public:
  explicit FqContext(int q);

  int q() const { return q_; }
  int p() const { return p_; }
  int degree() const { return r_; }
  fq_t add(fq_t a, fq_t b) const { return add_[a * q_ + b]; }
  fq_t sub(fq_t a, fq_t b) const { return add_[a * q_ + neg_[b]]; }
  fq_t mul(fq_t a, fq_t b) const { return mul_[a * q_ + b]; }
  fq_t neg(fq_t a) const { return neg_[a]; }
  fq_t inv(fq_t a) const;
  fq_t div(fq_t a, fq_t b) const { return mul(a, inv(b)); }
  fq_t pow(fq_t a, long long e) const;
  // Tr_{F_q/F_p}, as an integer in [0, p).
  int trace(fq_t a) const { return trace_[a]; }
  // Primitive element g0 = y (or the smallest generator when r = 1).
  fq_t generator() const { return gen_; }
  // Discrete log base g0; a != 0.
  int log(fq_t a) const;
  fq_t exp(long long k) const;
  fq_t from_int(long long n) const;

 private:
  int q_, p_, r_;
  fq_t gen_ = 1;
  std::vector<fq_t> add_, mul_, neg_, inv_, exp_;
  std::vector<int> log_, trace_;
};

// k_{fbar} = F_q[X]/(X^2 - d X - c); elements x0 + x1 X.
class Fq2Context {
 public:
  struct El {
    fq_t x0 = 0, x1 = 0;
    bool operator==(const El& o) const { return x0 == o.x0 && x1 == o.x1; }
  };

  Fq2Context(const FqContext& F, fq_t c, fq_t d);
  static bool irreducible(const FqContext& F, fq_t c, fq_t d);

  const FqContext& base() const { return F_; }
  fq_t c() const { return c_; }
  fq_t d() const { return d_; }
  int order() const { return F_.q() * F_.q() - 1; }
  El add(El a, El b) const;
  El mul(El a, El b) const;
  El inv(El a) const;
  El frobenius(El a) const;
  fq_t norm(El a) const;
  fq_t trace(El a) const;
  int index(El a) const { return a.x0 + F_.q() * a.x1; }
  El from_index(int i) const { return El{static_cast<fq_t>(i % F_.q()), static_cast<fq_t>(i / F_.q())}; }
  // Canonical generator: the primitive element of least index.
  El generator() const { return gen_; }
  int log(El a) const;
  El exp(long long k) const;

 private:
  const FqContext& F_;
  fq_t c_, d_;
  El gen_;
  std::vector<int> log_;
  std::vector<El> exp_;
};

inline constexpr int kExact = 1 << 28;

// Element of F_q((t)) known modulo t^prec; prec == kExact marks exact values.
class FieldElem {
 public:
  FieldElem() = default;
  explicit FieldElem(const FqContext* F, int prec = kExact) : F_(F), prec_(prec) {}
  static FieldElem constant(const FqContext* F, fq_t c);
  static FieldElem monomial(const FqContext* F, fq_t c, int k);
  static FieldElem from_coeffs(const FqContext* F, int lo, std::vector<fq_t> co, int prec = kExact);

  const FqContext* field() const { return F_; }
  int precision() const { return prec_; }
  bool exact() const { return prec_ >= kExact; }
  int lowest_exponent() const { return lo_; }
  const std::vector<fq_t>& coefficients() const { return co_; }
  // Known to be zero modulo t^prec.
  bool is_zero() const { return co_.empty(); }
  // Valuation, or nullopt when zero within precision.
  std::optional<int> val() const;
  // Valuation lower bound (prec when zero within precision).
  int val_bound() const { return co_.empty() ? prec_ : lo_; }
  fq_t coeff(int k) const;
  fq_t residue() const;
  // Decides x in P^b; throws PrecisionError when undecidable.
  bool in_ideal(int b) const;

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator-() const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem scale(fq_t c) const;
  FieldElem shift(int k) const;  // times t^k
  // Inverse known to relative precision min(own relative precision, rel_prec);
  // monomials invert exactly.
  FieldElem inverse(int rel_prec) const;
  FieldElem truncate(int prec) const;
  // Exact agreement of the known parts modulo t^min(prec, prec').
  bool agrees(const FieldElem& o) const;
  bool identical(const FieldElem& o) const { return lo_ == o.lo_ && co_ == o.co_ && prec_ == o.prec_; }

  std::string to_text() const;
  static FieldElem parse(const FqContext* F, const std::string& text);

 private:
  void normalize();
  const FqContext* F_ = nullptr;
  int lo_ = 0;
  std::vector<fq_t> co_;
  int prec_ = kExact;
};

}  // namespace gammalab
