#include "gammalab/characters.hpp"

#include <sstream>

namespace gammalab {

namespace {

int mod(long a, long n) {
  long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// Truncated series 1 + a_1 t + ... + a_L t^L as a coefficient vector of length L+1.
using Trunc = std::vector<fq_t>;

Trunc trunc_mul(const FqContext& F, const Trunc& a, const Trunc& b) {
  size_t n = a.size();
  Trunc r(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; i + j < n; ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  return r;
}

Trunc trunc_pow(const FqContext& F, Trunc a, long e) {
  Trunc r(a.size(), 0);
  r[0] = 1;
  while (e > 0) {
    if (e & 1) r = trunc_mul(F, r, a);
    a = trunc_mul(F, a, a);
    e >>= 1;
  }
  return r;
}

int trunc_index(int q, const Trunc& a) {
  int idx = 0;
  for (size_t j = a.size() - 1; j >= 1; --j) idx = idx * q + a[j];
  return idx;
}

Trunc trunc_from_index(int q, int idx, int L) {
  Trunc a(static_cast<size_t>(L + 1), 0);
  a[0] = 1;
  for (int j = 1; j <= L; ++j) {
    a[static_cast<size_t>(j)] = static_cast<fq_t>(idx % q);
    idx /= q;
  }
  return a;
}

// Smallest p^e >= n: the exponent of (1+P)/(1+P^n).
int p_power_at_least(int p, int n) {
  int pe = 1;
  while (pe < n) pe *= p;
  return pe;
}

}  // namespace

int psi_exponent(const Session& s, const FieldElem& x) {
  int tr = s.F->trace(x.coeff(0));
  return mod(static_cast<long>(tr) * (s.C->m() / s.p()), s.C->m());
}

Scalar psi_F(const Session& s, const FieldElem& x) {
  return Scalar::root_of_unity(s.C, s.C->m(), psi_exponent(s, x));
}

int FiniteMultChar::value_exp(const Session& s, long l) const {
  int m = s.C->m();
  if (m % order != 0) throw ConfigError("character order does not divide the cyclotomic order");
  return mod(static_cast<long>(mod(static_cast<long>(exponent) * mod(l, order), order)) * (m / order), m);
}

Scalar FiniteMultChar::value_at_log(const Session& s, long l) const {
  return Scalar::root_of_unity(s.C, s.C->m(), value_exp(s, l));
}

int one_unit_index(const Session& s, const FieldElem& u, int L) {
  if (u.coeff(0) != 1) throw DomainError("not a principal unit");
  int q = s.q();
  int idx = 0;
  for (int j = L; j >= 1; --j) idx = idx * q + u.coeff(j);
  return idx;
}

QuasiCharacter QuasiCharacter::tame(const Session& s, int tame_exp, int unif_root) {
  QuasiCharacter c;
  c.q_ = s.q();
  c.m_ = s.C->m();
  c.tame_exp_ = mod(tame_exp, s.q() - 1);
  c.unif_root_ = mod(unif_root, c.m_);
  return c;
}

QuasiCharacter QuasiCharacter::wild(const Session& s, const FieldElem& c_def, int level) {
  if (level < 1) throw ConfigError("wild level must be positive");
  if (level > s.max_wild_level) throw ConfigError("unsupported wild level " + std::to_string(level));
  auto v = c_def.val();
  if (!v || *v != -level) throw DomainError("defining element must have valuation -level");
  const FqContext& F = *s.F;
  const int q = s.q(), p = s.p(), L = level, m = s.C->m();
  const int pe = p_power_at_least(p, L + 1);
  if (m % pe != 0) throw ConfigError("cyclotomic order too small for wild level");
  const int size = [&] {
    int n = 1;
    for (int j = 0; j < L; ++j) n *= q;
    return n;
  }();
  // tbl[i] = k with chi = zeta_{pe}^k.
  std::vector<int> tbl(static_cast<size_t>(size), -1);
  const int sfloor = L / 2 + 1;
  auto lowest_digit = [&](int idx) {
    int j = 1;
    while (idx % q == 0 && j <= L) {
      idx /= q;
      ++j;
    }
    return j;  // L+1 for the identity
  };

  // chi(1+x) = psi(c x) on 1 + P^s.
  for (int idx = 0; idx < size; ++idx) {
    if (lowest_digit(idx) < sfloor) continue;
    Trunc a = trunc_from_index(q, idx, L);
    fq_t cst = 0;
    for (int j = 1; j <= L; ++j) cst = F.add(cst, F.mul(c_def.coeff(-j), a[static_cast<size_t>(j)]));
    tbl[static_cast<size_t>(idx)] = mod(static_cast<long>(F.trace(cst)) * (pe / p), pe);
  }

  // Lift down the filtration along g_i = 1 + y^i t^j, the F_p-basis of each layer.
  for (int j = sfloor - 1; j >= 1; --j) {
    const int r = F.degree();
    std::vector<Trunc> ginv(static_cast<size_t>(r));
    std::vector<int> vroot(static_cast<size_t>(r));
    int pi = 1;
    for (int i = 0; i < r; ++i, pi *= p) {
      Trunc g(static_cast<size_t>(L + 1), 0);
      g[0] = 1;
      g[static_cast<size_t>(j)] = static_cast<fq_t>(pi);
      int w = tbl[static_cast<size_t>(trunc_index(q, trunc_pow(F, g, p)))];
      if (w < 0 || w % p != 0) throw DomainError("wild table lift inconsistent");
      vroot[static_cast<size_t>(i)] = w / p;
      ginv[static_cast<size_t>(i)] = trunc_pow(F, g, pe - 1);
    }
    for (int idx = 0; idx < size; ++idx) {
      if (lowest_digit(idx) != j) continue;
      Trunc u = trunc_from_index(q, idx, L);
      int digits = u[static_cast<size_t>(j)];
      long acc = 0;
      for (int i = 0; i < r; ++i, digits /= p) {
        int e = digits % p;
        acc += static_cast<long>(e) * vroot[static_cast<size_t>(i)];
        for (int k = 0; k < e; ++k) u = trunc_mul(F, u, ginv[static_cast<size_t>(i)]);
      }
      int h = tbl[static_cast<size_t>(trunc_index(q, u))];
      if (h < 0) throw DomainError("wild table lift incomplete");
      tbl[static_cast<size_t>(idx)] = mod(acc + h, pe);
    }
  }

  auto table = std::make_shared<std::vector<int>>(tbl.size());
  for (size_t i = 0; i < tbl.size(); ++i) (*table)[i] = tbl[i] * (m / pe);
  QuasiCharacter c;
  c.q_ = q;
  c.m_ = m;
  c.level_ = L;
  c.c_def_ = c_def;
  c.wild_ = std::move(table);
  return c;
}

int QuasiCharacter::conductor_exponent() const {
  if (level_ > 0) return level_ + 1;
  return tame_exp_ != 0 ? 1 : 0;
}

int QuasiCharacter::value_exp(const Session& s, const FieldElem& x) const {
  auto v = x.val();
  if (!v) throw PrecisionError("character argument is zero within precision");
  const FqContext& F = *s.F;
  fq_t a0 = x.coeff(*v);
  long e = static_cast<long>(unif_root_) * *v;
  if (tame_exp_ != 0) e += static_cast<long>(tame_exp_) * F.log(a0) * (m_ / (q_ - 1));
  if (level_ > 0) {
    FieldElem u = x.shift(-*v).scale(F.inv(a0));
    e += static_cast<long>(wild_sign_) * (*wild_)[static_cast<size_t>(one_unit_index(s, u, level_))];
  }
  return mod(e, m_);
}

Scalar QuasiCharacter::value(const Session& s, const FieldElem& x) const {
  return Scalar::root_of_unity(s.C, m_, value_exp(s, x));
}

QuasiCharacter QuasiCharacter::inverse() const {
  QuasiCharacter c = *this;
  c.tame_exp_ = tame_exp_ == 0 ? 0 : (q_ - 1) - tame_exp_;
  c.unif_root_ = unif_root_ == 0 ? 0 : m_ - unif_root_;
  c.wild_sign_ = -wild_sign_;
  if (c_def_) c.c_def_ = -*c_def_;
  return c;
}

int QuasiCharacter::detected_level(const Session& s) const {
  if (level_ == 0) return 0;
  const int q = s.q();
  int size = static_cast<int>(wild_->size());
  // Elements of 1 + P^j are the indices divisible by q^{j-1}.
  for (int j = level_, step = size / q; j >= 1; --j, step /= q) {
    for (int idx = 0; idx < size; idx += step)
      if ((*wild_)[static_cast<size_t>(idx)] != 0) return j;
  }
  return 0;
}

std::string QuasiCharacter::describe() const {
  std::ostringstream os;
  if (level_ == 0) {
    if (tame_exp_ == 0 && unif_root_ == 0) return "trivial";
    os << "tame(e=" << tame_exp_ << ",root=" << unif_root_ << ")";
    return os.str();
  }
  os << "wild(L=" << level_ << ",c=" << c_def_->to_text();
  if (wild_sign_ < 0) os << ",inverse";
  os << ")";
  return os.str();
}

std::vector<QuasiCharacter> build_xi_middle(const Session& s) { return build_xi_d(s, 1, 2); }

std::vector<QuasiCharacter> build_xi_d(const Session& s, int num, int den) {
  if (num <= 0 || den <= 0) throw ConfigError("depth must be positive");
  auto ceil_div = [](int a, int b) { return (a + b - 1) / b; };
  int la = ceil_div(2 * num + den, den);
  int lb = ceil_div(2 * num + 2 * den, den);
  if (lb > s.max_wild_level) throw ConfigError("unsupported wild level " + std::to_string(lb));
  if (ceil_div(num, den) > 1) throw ConfigError("depth beyond the supported range");
  std::vector<QuasiCharacter> out;
  // O^x / (1+P) is represented by the constants F_q^x.
  for (int a = 1; a < s.q(); ++a)
    out.push_back(QuasiCharacter::wild(s, FieldElem::monomial(s.f(), static_cast<fq_t>(a), -la), la));
  out.push_back(QuasiCharacter::wild(s, FieldElem::monomial(s.f(), 1, -lb), lb));
  out.push_back(QuasiCharacter::tame(s, 0, 0));
  return out;
}

TateIntegrals tate_integrals(const Session& s, const QuasiCharacter& chi) {
  const Ctx& C = s.C;
  const int q = s.q();
  const int a = chi.conductor_exponent();
  const int uroot = chi.unif_root();
  if (a == 0) {
    // Z(s, chi, 1_O) = 1/(1 - chi(w) X); 1_O^ = sqrt(q) 1_P.
    Scalar cw = Scalar::root_of_unity(C, C->m(), uroot);
    LaurentPoly one = LaurentPoly::monomial(Scalar::one(C), 0);
    RationalFnX z_s(one, one - LaurentPoly::monomial(cw, 1));
    // sum_{v>=1} sqrt(q) (chi(w)^{-1} q^{-1} X^{-1})^v, closed over X.
    Scalar r = cw.inverse() * mpq_class(1, q);
    RationalFnX z_dual(LaurentPoly::monomial(Scalar::sqrt_q(C) * r, 0),
                       LaurentPoly::monomial(Scalar::one(C), 1) - LaurentPoly::monomial(r, 0));
    return {z_s, z_dual};
  }
  // f = 1_{1+P^a}: Z(s) = vol(1+P^a); f^(y) = psi(y) q^{1/2-a} 1_{P^{1-a}}(y).
  mpz_class ncells = q - 1;
  for (int k = 1; k < a; ++k) ncells *= q;
  RationalFnX z_s = RationalFnX::monomial(Scalar(C, mpq_class(1, 1) / mpq_class(ncells)), 0);
  const QuasiCharacter inv = chi.inverse();
  RootSum acc(C);
  const FqContext* F = s.f();
  std::vector<fq_t> co(static_cast<size_t>(a), 0);
  mpz_class qa = 1;
  for (int k = 0; k < a; ++k) qa *= q;
  for (int v = 1 - a; v <= 0; ++v) {
    mpq_class qv = 1;
    for (int k = 0; k < -v; ++k) qv *= q;
    // q^{-a} * q^{-v} * cell volume; the factor sqrt(q) is applied once below.
    mpq_class w = qv / mpq_class(qa * ncells);
    mpz_class total = ncells;
    for (long idx = 0; idx < total.get_si(); ++idx) {
      long r = idx;
      co[0] = static_cast<fq_t>(1 + r % (q - 1));
      r /= (q - 1);
      for (int k = 1; k < a; ++k) {
        co[static_cast<size_t>(k)] = static_cast<fq_t>(r % q);
        r /= q;
      }
      FieldElem y = FieldElem::from_coeffs(F, v, co);
      int root = psi_exponent(s, y) + inv.value_exp(s, y);
      acc.add(-v, root % C->m(), w);
    }
  }
  RationalFnX z_dual(acc.to_poly() * Scalar::sqrt_q(C));
  return {z_s, z_dual};
}

RationalFnX tate_gamma(const Session& s, const QuasiCharacter& chi) {
  TateIntegrals z = tate_integrals(s, chi);
  return z.z_dual / z.z_s;
}

}  // namespace gammalab
