#pragma once

#include <string>
#include <vector>

#include "gammalab/localfield.hpp"
#include "gammalab/scalars.hpp"
#include "gammalab/session.hpp"

namespace gammalab {

// n x n matrix over F_q((t)); indices are 0-based.
class LocalMatrix {
 public:
  LocalMatrix() = default;
  LocalMatrix(const FqContext* F, int n);
  static LocalMatrix identity(const FqContext* F, int n);
  static LocalMatrix scalar(const FieldElem& x, int n);
  static LocalMatrix diag(const std::vector<FieldElem>& d);
  // Block diagonal diag(a, b).
  static LocalMatrix block_diag(const LocalMatrix& a, const LocalMatrix& b);

  int n() const { return n_; }
  const FqContext* field() const { return F_; }
  FieldElem& at(int i, int j) { return e_[static_cast<size_t>(i * n_ + j)]; }
  const FieldElem& at(int i, int j) const { return e_[static_cast<size_t>(i * n_ + j)]; }

  LocalMatrix operator*(const LocalMatrix& o) const;
  LocalMatrix operator+(const LocalMatrix& o) const;
  LocalMatrix operator-(const LocalMatrix& o) const;
  LocalMatrix transpose() const;
  LocalMatrix inverse(int rel_prec) const;
  LocalMatrix pow(int k, int rel_prec) const;
  FieldElem det() const;
  // Entrywise agreement within the known precision.
  bool agrees(const LocalMatrix& o) const;
  std::string to_text() const;

 private:
  const FqContext* F_ = nullptr;
  int n_ = 0;
  std::vector<FieldElem> e_;
};

// Entrywise valuation bounds: entry (i,j) lies in P^{bound(i,j)}.
struct Lattice {
  int n = 0;
  std::vector<int> b;
  int bound(int i, int j) const { return b[static_cast<size_t>(i * n + j)]; }
  // Sum of the bounds, used for indices and volumes.
  long total() const;
};

// Powers of the radical of the standard minimal order J_N (k = 0 gives J_N).
Lattice radical_J(int N, int k);
// Powers of the radical of A_{2N} = [[J, w^{-1} J], [w J, J]] (k = 0 gives A_{2N}).
Lattice radical_A2N(int N, int k);

// x in the lattice, decided entrywise; throws PrecisionError when undecidable.
bool in_lattice(const LocalMatrix& x, const Lattice& L);
// x in 1 + L.
bool in_unit_lattice(const LocalMatrix& x, const Lattice& L);

struct MiddleLift {
  FieldElem c, d;
};

LocalMatrix beta_f(const Session& s, const MiddleLift& f);
// Closed-form inverse of beta_f.
LocalMatrix beta_f_inverse(const Session& s, const MiddleLift& f);
LocalMatrix sigma_f(const Session& s, const MiddleLift& f);
LocalMatrix beta_u(const Session& s, const FieldElem& u);
LocalMatrix g_u(const Session& s, const FieldElem& u);
LocalMatrix w_long(const FqContext* F, int r);
// diag(I_m, w_{n-m})
LocalMatrix w_nm(const FqContext* F, int n, int m);
// Matrix of a0 c + a1 sigma_f acting in the ordered basis of L_f.
LocalMatrix embed_OL(const Session& s, const MiddleLift& f, const FieldElem& a0, const FieldElem& a1);

// Multiplication in O_L = O[sigma], sigma^2 = d sigma + c, written as a0 c + a1 sigma.
struct OLElem {
  FieldElem a0, a1;
};
OLElem ol_mul(const MiddleLift& f, const OLElem& x, const OLElem& y);
OLElem ol_inverse(const MiddleLift& f, const OLElem& x, int rel_prec);

// Haar volumes. GL(n) measures are normalized by vol(GL(n, O)) = gl_scale.
Scalar vol_additive_ideal(const Session& s, int k);
Scalar vol_mult_units(const Session& s, int k);
Scalar vol_unit_lattice(const Session& s, const Lattice& L, const Scalar& gl_scale);
// |GL_n(F_q)|
mpz_class gl_order(int q, int n);
// [1 + L1 : 1 + L2] for L2 inside L1.
mpz_class unit_index(int q, const Lattice& L1, const Lattice& L2);

}  // namespace gammalab
