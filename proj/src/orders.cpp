#include "gammalab/orders.hpp"

#include <sstream>

namespace gammalab {

LocalMatrix::LocalMatrix(const FqContext* F, int n) : F_(F), n_(n), e_(static_cast<size_t>(n * n), FieldElem(F)) {}

LocalMatrix LocalMatrix::identity(const FqContext* F, int n) {
  LocalMatrix m(F, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = FieldElem::constant(F, 1);
  return m;
}

LocalMatrix LocalMatrix::scalar(const FieldElem& x, int n) {
  LocalMatrix m(x.field(), n);
  for (int i = 0; i < n; ++i) m.at(i, i) = x;
  return m;
}

LocalMatrix LocalMatrix::diag(const std::vector<FieldElem>& d) {
  LocalMatrix m(d.front().field(), static_cast<int>(d.size()));
  for (int i = 0; i < m.n_; ++i) m.at(i, i) = d[static_cast<size_t>(i)];
  return m;
}

LocalMatrix LocalMatrix::block_diag(const LocalMatrix& a, const LocalMatrix& b) {
  LocalMatrix m(a.F_, a.n_ + b.n_);
  for (int i = 0; i < a.n_; ++i)
    for (int j = 0; j < a.n_; ++j) m.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.n_; ++i)
    for (int j = 0; j < b.n_; ++j) m.at(a.n_ + i, a.n_ + j) = b.at(i, j);
  return m;
}

LocalMatrix LocalMatrix::operator*(const LocalMatrix& o) const {
  LocalMatrix r(F_, n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      const FieldElem& a = at(i, k);
      if (a.is_zero() && a.exact()) continue;
      for (int j = 0; j < n_; ++j) {
        const FieldElem& b = o.at(k, j);
        if (b.is_zero() && b.exact()) continue;
        r.at(i, j) = r.at(i, j) + a * b;
      }
    }
  return r;
}

LocalMatrix LocalMatrix::operator+(const LocalMatrix& o) const {
  LocalMatrix r(F_, n_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

LocalMatrix LocalMatrix::operator-(const LocalMatrix& o) const {
  LocalMatrix r(F_, n_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

LocalMatrix LocalMatrix::transpose() const {
  LocalMatrix r(F_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
  return r;
}

LocalMatrix LocalMatrix::inverse(int rel_prec) const {
  LocalMatrix a = *this;
  LocalMatrix inv = identity(F_, n_);
  for (int col = 0; col < n_; ++col) {
    // Pivot of least valuation keeps the elimination integral.
    int piv = -1, best = kExact;
    for (int r = col; r < n_; ++r) {
      const FieldElem& x = a.at(r, col);
      if (!x.is_zero() && x.lowest_exponent() < best) {
        best = x.lowest_exponent();
        piv = r;
      }
    }
    if (piv < 0) throw PrecisionError("matrix singular within precision");
    if (piv != col)
      for (int j = 0; j < n_; ++j) {
        std::swap(a.at(piv, j), a.at(col, j));
        std::swap(inv.at(piv, j), inv.at(col, j));
      }
    FieldElem pinv = a.at(col, col).inverse(rel_prec);
    for (int j = 0; j < n_; ++j) {
      a.at(col, j) = a.at(col, j) * pinv;
      inv.at(col, j) = inv.at(col, j) * pinv;
    }
    for (int r = 0; r < n_; ++r) {
      if (r == col || a.at(r, col).is_zero()) continue;
      FieldElem f = a.at(r, col);
      for (int j = 0; j < n_; ++j) {
        a.at(r, j) = a.at(r, j) - f * a.at(col, j);
        inv.at(r, j) = inv.at(r, j) - f * inv.at(col, j);
      }
    }
  }
  return inv;
}

LocalMatrix LocalMatrix::pow(int k, int rel_prec) const {
  LocalMatrix base = k < 0 ? inverse(rel_prec) : *this;
  LocalMatrix r = identity(F_, n_);
  for (int i = 0; i < (k < 0 ? -k : k); ++i) r = r * base;
  return r;
}

FieldElem LocalMatrix::det() const {
  // Fraction-free expansion is unnecessary at these sizes; use permutations for n <= 4
  // and Laplace expansion otherwise.
  if (n_ == 1) return at(0, 0);
  FieldElem sum(F_);
  for (int j = 0; j < n_; ++j) {
    if (at(0, j).is_zero() && at(0, j).exact()) continue;
    LocalMatrix minor(F_, n_ - 1);
    for (int r = 1; r < n_; ++r)
      for (int c = 0, cc = 0; c < n_; ++c)
        if (c != j) minor.at(r - 1, cc++) = at(r, c);
    FieldElem term = at(0, j) * minor.det();
    sum = (j % 2 == 0) ? sum + term : sum - term;
  }
  return sum;
}

bool LocalMatrix::agrees(const LocalMatrix& o) const {
  if (n_ != o.n_) return false;
  for (size_t i = 0; i < e_.size(); ++i)
    if (!e_[i].agrees(o.e_[i])) return false;
  return true;
}

std::string LocalMatrix::to_text() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < n_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < n_; ++j) os << (j ? ", " : "") << at(i, j).to_text();
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- lattices

long Lattice::total() const {
  long s = 0;
  for (int x : b) s += x;
  return s;
}

namespace {

int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

}  // namespace

Lattice radical_J(int N, int k) {
  Lattice L{N, std::vector<int>(static_cast<size_t>(N * N))};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) L.b[static_cast<size_t>(i * N + j)] = ceil_div(k + i - j, N);
  return L;
}

Lattice radical_A2N(int N, int k) {
  const int n = 2 * N;
  Lattice J = radical_J(N, k);
  Lattice L{n, std::vector<int>(static_cast<size_t>(n * n))};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int bi = i / N, bj = j / N;
      int off = (bi == 0 && bj == 1) ? -1 : (bi == 1 && bj == 0) ? 1 : 0;
      L.b[static_cast<size_t>(i * n + j)] = J.bound(i % N, j % N) + off;
    }
  return L;
}

bool in_lattice(const LocalMatrix& x, const Lattice& L) {
  for (int i = 0; i < x.n(); ++i)
    for (int j = 0; j < x.n(); ++j)
      if (!x.at(i, j).in_ideal(L.bound(i, j))) return false;
  return true;
}

bool in_unit_lattice(const LocalMatrix& x, const Lattice& L) {
  return in_lattice(x - LocalMatrix::identity(x.field(), x.n()), L);
}

// ---------------------------------------------------------------- special elements

LocalMatrix beta_f(const Session& s, const MiddleLift& f) {
  const int n = 2 * s.N;
  LocalMatrix b(s.f(), n);
  for (int i = 0; i + 1 < n; ++i) b.at(i + 1, i) = FieldElem::constant(s.f(), 1);
  b.at(0, n - 1) = f.c.shift(-2);
  b.at(s.N, n - 1) = f.d.shift(-1);
  return b;
}

LocalMatrix beta_f_inverse(const Session& s, const MiddleLift& f) {
  const int n = 2 * s.N;
  LocalMatrix b(s.f(), n);
  FieldElem ci = f.c.inverse(s.precision);
  for (int j = 0; j + 1 < n; ++j) b.at(j, j + 1) = FieldElem::constant(s.f(), 1);
  b.at(n - 1, 0) = ci.shift(2);
  b.at(s.N - 1, 0) = -(ci * f.d).shift(1);
  return b;
}

LocalMatrix sigma_f(const Session& s, const MiddleLift& f) {
  LocalMatrix b = beta_f(s, f).pow(s.N, s.precision);
  return b * LocalMatrix::scalar(FieldElem::monomial(s.f(), 1, 1), 2 * s.N);
}

LocalMatrix beta_u(const Session& s, const FieldElem& u) {
  const int N = s.N;
  LocalMatrix b(s.f(), N);
  for (int i = 0; i + 1 < N; ++i) b.at(i + 1, i) = FieldElem::constant(s.f(), 1);
  FieldElem x = u.inverse(s.precision).shift(-1);
  if (N == 1) b.at(0, 0) = x;
  else b.at(0, N - 1) = x;
  return b;
}

LocalMatrix g_u(const Session& s, const FieldElem& u) {
  LocalMatrix g = LocalMatrix::identity(s.f(), 2 * s.N);
  g.at(0, s.N) = u.inverse(s.precision).shift(-1);
  return g;
}

LocalMatrix w_long(const FqContext* F, int r) {
  LocalMatrix w(F, r);
  for (int i = 0; i < r; ++i) w.at(i, r - 1 - i) = FieldElem::constant(F, 1);
  return w;
}

LocalMatrix w_nm(const FqContext* F, int n, int m) {
  if (m == 0) return w_long(F, n);
  return LocalMatrix::block_diag(LocalMatrix::identity(F, m), w_long(F, n - m));
}

LocalMatrix embed_OL(const Session& s, const MiddleLift& f, const FieldElem& a0, const FieldElem& a1) {
  const int N = s.N;
  LocalMatrix m(s.f(), 2 * N);
  FieldElem top = a0 * f.c;
  FieldElem bot = top + a1 * f.d;
  FieldElem up = (a1 * f.c).shift(-1);
  FieldElem low = a1.shift(1);
  for (int i = 0; i < N; ++i) {
    m.at(i, i) = top;
    m.at(N + i, N + i) = bot;
    m.at(i, N + i) = up;
    m.at(N + i, i) = low;
  }
  return m;
}

OLElem ol_mul(const MiddleLift& f, const OLElem& x, const OLElem& y) {
  FieldElem a0 = x.a0 * y.a0 * f.c + x.a1 * y.a1;
  FieldElem a1 = (x.a0 * y.a1 + x.a1 * y.a0) * f.c + x.a1 * y.a1 * f.d;
  return OLElem{a0, a1};
}

OLElem ol_inverse(const MiddleLift& f, const OLElem& x, int rel_prec) {
  FieldElem ac = x.a0 * f.c;
  FieldElem det = ac * (ac + x.a1 * f.d) - x.a1 * x.a1 * f.c;
  FieldElem di = det.inverse(rel_prec);
  FieldElem ci = f.c.inverse(rel_prec);
  return OLElem{ci * (ac + x.a1 * f.d) * di, -(x.a1 * di)};
}

// ---------------------------------------------------------------- volumes

mpz_class gl_order(int q, int n) {
  mpz_class qn, r = 1;
  mpz_ui_pow_ui(qn.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(n));
  for (int i = 0; i < n; ++i) {
    mpz_class qi;
    mpz_ui_pow_ui(qi.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(i));
    r *= qn - qi;
  }
  return r;
}

mpz_class unit_index(int q, const Lattice& L1, const Lattice& L2) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(L2.total() - L1.total()));
  return r;
}

Scalar vol_additive_ideal(const Session& s, int k) { return Scalar::half_power(s.C, 1 - 2L * k); }

Scalar vol_mult_units(const Session& s, int k) {
  if (k == 0) return Scalar::one(s.C);
  return Scalar::half_power(s.C, 2L * (1 - k)) * mpq_class(1, s.q() - 1);
}

Scalar vol_unit_lattice(const Session& s, const Lattice& L, const Scalar& gl_scale) {
  const long e = static_cast<long>(L.n) * L.n - L.total();
  mpq_class g(gl_order(s.q(), L.n));
  return Scalar::half_power(s.C, 2 * e) * mpq_class(1 / g) * gl_scale;
}

}  // namespace gammalab
