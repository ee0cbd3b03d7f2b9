#include "gammalab/types_supercuspidal.hpp"

#include <numeric>
#include <sstream>

namespace gammalab {

namespace {

int mod(long a, long n) {
  long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// Exponent of psi_F(sign * tr(beta (y - 1))) using only the nonzero entries of beta.
int psi_trace_exp(const Session& s, const LocalMatrix& beta, const LocalMatrix& y, int sign) {
  const int n = beta.n();
  FieldElem tr(s.f());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const FieldElem& b = beta.at(i, j);
      if (b.is_zero() && b.exact()) continue;
      FieldElem e = y.at(j, i);
      if (i == j) e = e - FieldElem::constant(s.f(), 1);
      tr = tr + b * e;
    }
  int r = psi_exponent(s, tr);
  return sign > 0 ? r : mod(-r, s.C->m());
}

std::vector<LocalMatrix> power_table(const LocalMatrix& b, const LocalMatrix& binv, int K) {
  std::vector<LocalMatrix> t(static_cast<size_t>(2 * K + 1));
  LocalMatrix id = LocalMatrix::identity(b.field(), b.n());
  t[static_cast<size_t>(K)] = id;
  for (int k = 1; k <= K; ++k) {
    t[static_cast<size_t>(K + k)] = t[static_cast<size_t>(K + k - 1)] * b;
    t[static_cast<size_t>(K - k)] = t[static_cast<size_t>(K - k + 1)] * binv;
  }
  return t;
}

int det_val(const LocalMatrix& h) {
  auto v = h.det().val();
  if (!v) throw NotInGroup("singular matrix");
  return *v;
}

using Poly = std::vector<fq_t>;  // low degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_add(const FqContext& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  trim(r);
  return r;
}

Poly poly_mul(const FqContext& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  trim(r);
  return r;
}

Poly poly_neg(const FqContext& F, Poly a) {
  for (auto& x : a) x = F.neg(x);
  return a;
}

// det(X I - A) by cofactor expansion along the first row.
Poly char_poly_rec(const FqContext& F, const std::vector<std::vector<Poly>>& m) {
  const size_t n = m.size();
  if (n == 1) return m[0][0];
  Poly sum;
  for (size_t j = 0; j < n; ++j) {
    if (m[0][j].empty()) continue;
    std::vector<std::vector<Poly>> minor(n - 1, std::vector<Poly>(n - 1));
    for (size_t r = 1; r < n; ++r)
      for (size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor[r - 1][cc++] = m[r][c];
    Poly term = poly_mul(F, m[0][j], char_poly_rec(F, minor));
    sum = poly_add(F, sum, j % 2 == 0 ? term : poly_neg(F, term));
  }
  return sum;
}

Poly char_poly_residue(const FqContext& F, const LocalMatrix& y) {
  const int n = y.n();
  std::vector<std::vector<Poly>> m(static_cast<size_t>(n), std::vector<Poly>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const FieldElem& e = y.at(i, j);
      if (!e.in_ideal(0)) throw DomainError("Y is not integral");
      Poly p{F.neg(e.residue())};
      if (i == j) p.push_back(1);
      trim(p);
      m[static_cast<size_t>(i)][static_cast<size_t>(j)] = p;
    }
  return char_poly_rec(F, m);
}

Poly poly_pow(const FqContext& F, const Poly& a, int e) {
  Poly r{1};
  for (int i = 0; i < e; ++i) r = poly_mul(F, r, a);
  return r;
}

bool poly_irreducible(const FqContext& F, const Poly& a) {
  if (a.size() == 2) return true;
  if (a.size() == 3) return Fq2Context::irreducible(F, F.neg(a[0]), F.neg(a[1]));
  throw DomainError("only degrees 1 and 2 are supported");
}

Poly min_poly_of(const FqContext& F, const Poly& cp) {
  const int deg = static_cast<int>(cp.size()) - 1;
  const int q = F.q();
  for (int d = 1; d <= 2; ++d) {
    if (deg % d != 0) continue;
    int count = d == 1 ? q : q * q;
    for (int i = 0; i < count; ++i) {
      Poly cand(static_cast<size_t>(d + 1), 0);
      cand[static_cast<size_t>(d)] = 1;
      cand[0] = static_cast<fq_t>(i % q);
      if (d == 2) cand[1] = static_cast<fq_t>(i / q);
      if (!poly_irreducible(F, cand)) continue;
      if (poly_pow(F, cand, deg / d) == cp) return cand;
    }
  }
  throw DomainError("characteristic polynomial is not a power of an irreducible of degree <= 2");
}

}  // namespace

// ---------------------------------------------------------------- roots of unity

int RootOfUnity::m_exp(int m) const {
  if (order <= 0 || m % order != 0) throw ConfigError("root of unity order does not divide the cyclotomic order");
  return mod(static_cast<long>(exp) * (m / order), m);
}

Scalar RootOfUnity::value(const Ctx& C) const { return Scalar::root_of_unity(C, C->m(), m_exp(C->m())); }

std::string RootOfUnity::to_text() const { return std::to_string(order) + ":" + std::to_string(exp); }

RootOfUnity RootOfUnity::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("root of unity must be written order:exp");
  RootOfUnity r{std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  if (r.order <= 0) throw ConfigError("root of unity order must be positive");
  r.exp = mod(r.exp, r.order);
  return r;
}

bool RootOfUnity::operator==(const RootOfUnity& o) const {
  return mod(static_cast<long>(exp) * o.order - static_cast<long>(o.exp) * order,
             static_cast<long>(order) * o.order) == 0;
}

// ---------------------------------------------------------------- strata

MiddleStratum::MiddleStratum(const Session& s, const MiddleLift& lift) : s_(s), lift_(lift) {
  const FqContext& F = *s.f();
  fq_t cb = lift.c.residue(), db = lift.d.residue();
  if (!lift.c.in_ideal(0) || !lift.d.in_ideal(0) || !Fq2Context::irreducible(F, cb, db))
    throw DomainError("f̄ reducible over F_q");
  kf_ = std::make_shared<const Fq2Context>(F, cb, db);
  beta_ = beta_f(s, lift);
  powers_ = power_table(beta_, beta_f_inverse(s, lift), kMaxPower);
  u1_ = radical_A2N(s.N, 1);
  const int order = kf_->order();
  reps_.resize(static_cast<size_t>(F.q() * F.q()));
  for (int l = 0; l < order; ++l) {
    Fq2Context::El e = kf_->exp(l);
    UnitRep r;
    r.residue = e;
    r.log = l;
    FieldElem a0 = FieldElem::constant(s.f(), F.div(e.x0, cb));
    FieldElem a1 = FieldElem::constant(s.f(), e.x1);
    r.j = embed_OL(s, lift, a0, a1);
    OLElem inv = ol_inverse(lift, OLElem{a0, a1}, s.precision);
    r.j_inv = embed_OL(s, lift, inv.a0, inv.a1);
    reps_[static_cast<size_t>(kf_->index(e))] = std::move(r);
  }
}

const LocalMatrix& MiddleStratum::beta_power(int k) const {
  if (k < -kMaxPower || k > kMaxPower) throw ConfigError("beta power outside the cached range");
  return powers_[static_cast<size_t>(k + kMaxPower)];
}

int MiddleStratum::psi_beta_exp(const LocalMatrix& y, int sign) const { return psi_trace_exp(s_, beta_, y, sign); }

int MiddleStratum::residue_log(fq_t a0, fq_t a1) const {
  return kf_->log(Fq2Context::El{s_.f()->mul(a0, kf_->c()), a1});
}

SimpleStratum::SimpleStratum(const Session& s, const FieldElem& u) : s_(s), u_(u) {
  if (!u.in_ideal(0) || u.residue() == 0) throw DomainError("u must be a unit");
  beta_ = beta_u(s, u);
  LocalMatrix binv = beta_.inverse(s.precision);
  powers_ = power_table(beta_, binv, kMaxPower);
  u1_ = radical_J(s.N, 1);
}

const LocalMatrix& SimpleStratum::beta_power(int k) const {
  if (k < -kMaxPower || k > kMaxPower) throw ConfigError("beta power outside the cached range");
  return powers_[static_cast<size_t>(k + kMaxPower)];
}

int SimpleStratum::psi_beta_exp(const LocalMatrix& y, int sign) const { return psi_trace_exp(s_, beta_, y, sign); }

// ---------------------------------------------------------------- parameters

std::string MiddleParams::describe() const {
  std::ostringstream os;
  os << "middle(c=" << stratum->lift().c.to_text() << ",d=" << stratum->lift().d.to_text()
     << ",chi=" << chi.exponent << "/" << chi.order << ",zeta=" << zeta.to_text() << ")";
  return os.str();
}

std::string SimpleParams::describe() const {
  std::ostringstream os;
  os << "simple(u=" << stratum->u().to_text() << ",phi=" << phi.exponent << "/" << phi.order
     << ",zeta'=" << zeta_prime.to_text() << ")";
  return os.str();
}

MiddleParams make_middle(const Session& s, fq_t c, fq_t d, int chi_exp, RootOfUnity zeta) {
  MiddleLift lift{FieldElem::constant(s.f(), c), FieldElem::constant(s.f(), d)};
  auto st = std::make_shared<const MiddleStratum>(s, lift);
  int order = s.q() * s.q() - 1;
  zeta.m_exp(s.C->m());
  return MiddleParams{st, FiniteMultChar{order, mod(chi_exp, order)}, zeta};
}

SimpleParams make_simple(const Session& s, fq_t u, int phi_exp, RootOfUnity zeta_prime) {
  auto st = std::make_shared<const SimpleStratum>(s, FieldElem::constant(s.f(), u));
  zeta_prime.m_exp(s.C->m());
  return SimpleParams{st, FiniteMultChar{s.q() - 1, mod(phi_exp, s.q() - 1)}, zeta_prime};
}

// ---------------------------------------------------------------- factorization

JtildeFactorization factorize_Jtilde(const MiddleStratum& st, const LocalMatrix& h) {
  const Session& s = st.session();
  const int N = s.N;
  int vd = det_val(h);
  if (vd % st.beta_det_val() != 0) throw NotInGroup("det valuation not a multiple of val det beta_f");
  int k = vd / st.beta_det_val();
  LocalMatrix g0 = h * st.beta_power(-k);
  // Residue of a0 c + a1 sigma_f: (0,0) entry gives a0 c, (N,0) entry gives a1 t.
  Fq2Context::El e{g0.at(0, 0).coeff(0), g0.at(N, 0).coeff(1)};
  if (e.x0 == 0 && e.x1 == 0) throw NotInGroup("residue in J/U^1 vanishes");
  const auto& rep = st.unit_reps()[static_cast<size_t>(st.residue_field().index(e))];
  LocalMatrix y = g0 * rep.j_inv;
  if (!in_unit_lattice(y, st.u1())) throw NotInGroup("beta^{-k} h not in J");
  JtildeFactorization f;
  f.k = k;
  f.unit_part = rep.j;
  f.u1_part = y;
  f.sym = LambdaSym{k, rep.log, st.psi_beta_exp(y)};
  return f;
}

JtildeFactorization factorize_Jtilde(const SimpleStratum& st, const LocalMatrix& h, int sign) {
  const Session& s = st.session();
  int vd = det_val(h);
  int k = vd / st.beta_det_val();
  LocalMatrix g0 = h * st.beta_power(-k);
  fq_t a = g0.at(0, 0).coeff(0);
  if (a == 0) throw NotInGroup("residue in J/U^1 vanishes");
  FieldElem ainv = FieldElem::constant(s.f(), s.f()->inv(a));
  LocalMatrix y = g0 * LocalMatrix::scalar(ainv, s.N);
  if (!in_unit_lattice(y, st.u1())) throw NotInGroup("beta^{-k} h not in J");
  JtildeFactorization f;
  f.k = k;
  f.unit_part = LocalMatrix::scalar(FieldElem::constant(s.f(), a), s.N);
  f.u1_part = y;
  f.sym = LambdaSym{k, s.f()->log(a), st.psi_beta_exp(y, sign)};
  return f;
}

Scalar psi_beta(const Session& s, const LocalMatrix& x, const LocalMatrix& beta) {
  return Scalar::root_of_unity(s.C, s.C->m(), psi_trace_exp(s, beta, x, 1));
}

Scalar lambda_value(const Session& s, const MiddleParams& p, const LambdaSym& sym) {
  const int m = s.C->m();
  long e = sym.psi_root + static_cast<long>(sym.k) * p.zeta.m_exp(m) + p.chi.value_exp(s, sym.unit_log);
  return Scalar::root_of_unity(s.C, m, mod(e, m));
}

Scalar lambda_value(const Session& s, const SimpleParams& p, const LambdaSym& sym) {
  const int m = s.C->m();
  long e = sym.psi_root + static_cast<long>(sym.k) * p.zeta_prime.m_exp(m) + p.phi.value_exp(s, sym.unit_log);
  return Scalar::root_of_unity(s.C, m, mod(e, m));
}

Scalar lambda_middle(const MiddleParams& p, const LocalMatrix& h) {
  const Session& s = p.stratum->session();
  return lambda_value(s, p, factorize_Jtilde(*p.stratum, h).sym);
}

Scalar lambda_simple(const SimpleParams& p, const LocalMatrix& h, bool conj) {
  const Session& s = p.stratum->session();
  return lambda_value(s, p, factorize_Jtilde(*p.stratum, h, conj ? -1 : 1).sym);
}

// ---------------------------------------------------------------- central characters

int CentralCharacter::value_exp(const Session& s, const FieldElem& x) const {
  auto v = x.val();
  if (!v) throw DomainError("central character at zero");
  const int m = s.C->m();
  long e = static_cast<long>(*v) * at_uniformizer + on_units.value_exp(s, s.f()->log(x.coeff(*v)));
  return mod(e, m);
}

Scalar CentralCharacter::value(const Session& s, const FieldElem& x) const {
  return Scalar::root_of_unity(s.C, s.C->m(), value_exp(s, x));
}

CentralCharacter central_character(const MiddleParams& p) {
  const MiddleStratum& st = *p.stratum;
  const Session& s = st.session();
  const Fq2Context& kf = st.residue_field();
  const int q = s.q(), m = s.C->m();
  int l0 = kf.log(Fq2Context::El{s.f()->generator(), 0});
  int on_units = mod(static_cast<long>(p.chi.exponent) * l0, q * q - 1) / (q + 1);
  int sigma_log = kf.log(Fq2Context::El{0, 1});
  long at_unif = -static_cast<long>(s.N) * p.zeta.m_exp(m) + p.chi.value_exp(s, sigma_log);
  return CentralCharacter{FiniteMultChar{q - 1, mod(on_units, q - 1)}, mod(at_unif, m)};
}

CentralCharacter central_character(const SimpleParams& p) {
  const SimpleStratum& st = *p.stratum;
  const Session& s = st.session();
  const int m = s.C->m();
  long at_unif = static_cast<long>(s.N) * p.zeta_prime.m_exp(m) + p.phi.value_exp(s, s.f()->log(st.u_bar()));
  return CentralCharacter{p.phi, mod(-at_unif, m)};
}

// ---------------------------------------------------------------- strata polynomials

std::vector<fq_t> stratum_char_poly(const MiddleStratum& st) {
  const Session& s = st.session();
  const int N = s.N;
  LocalMatrix y = st.beta_power(N);
  // Y = beta^N varpi, conjugated by diag(I, varpi I) to make it integral.
  for (int i = 0; i < 2 * N; ++i)
    for (int j = 0; j < 2 * N; ++j) {
      int shift = 1 - (i >= N ? 1 : 0) + (j >= N ? 1 : 0);
      y.at(i, j) = y.at(i, j).shift(shift);
    }
  return char_poly_residue(*s.f(), y);
}

std::vector<fq_t> stratum_char_poly(const SimpleStratum& st) {
  const Session& s = st.session();
  LocalMatrix y = st.beta_power(s.N);
  for (int i = 0; i < s.N; ++i)
    for (int j = 0; j < s.N; ++j) y.at(i, j) = y.at(i, j).shift(1);
  return char_poly_residue(*s.f(), y);
}

std::vector<fq_t> stratum_min_poly(const MiddleStratum& st) {
  return min_poly_of(*st.session().f(), stratum_char_poly(st));
}

std::vector<fq_t> stratum_min_poly(const SimpleStratum& st) {
  return min_poly_of(*st.session().f(), stratum_char_poly(st));
}

mpq_class depth_middle(int N) { return mpq_class(1, N); }
mpq_class depth_simple(int n) { return mpq_class(1, n); }

}  // namespace gammalab
