#include "gammalab/scalars.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace gammalab {

namespace {

using IPoly = std::vector<long>;

void trim(IPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Exact division of integer polynomials with monic divisor.
IPoly idiv(IPoly a, const IPoly& b) {
  trim(a);
  IPoly qt(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  for (size_t i = a.size(); i-- >= b.size();) {
    long c = a[i];
    if (c != 0) {
      size_t sh = i - (b.size() - 1);
      qt[sh] = c;
      for (size_t j = 0; j < b.size(); ++j) a[sh + j] -= c * b[j];
    }
    if (i == b.size() - 1) break;
  }
  trim(a);
  if (!a.empty()) throw std::logic_error("cyclotomic division not exact");
  return qt;
}

IPoly cyclotomic(int m) {
  IPoly num(static_cast<size_t>(m) + 1, 0);
  num[0] = -1;
  num[static_cast<size_t>(m)] = 1;
  for (int d = 1; d < m; ++d)
    if (m % d == 0) num = idiv(num, cyclotomic(d));
  return num;
}

long lcm_ll(long a, long b) { return a / std::gcd(a, b) * b; }

int legendre(int a, int p) {
  a %= p;
  if (a == 0) return 0;
  int r = 1;
  for (int i = 0; i < (p - 1) / 2; ++i) r = r * a % p;
  return r == 1 ? 1 : -1;
}

std::vector<mpq_class> zeros(int n) { return std::vector<mpq_class>(static_cast<size_t>(n), mpq_class(0)); }

}  // namespace

std::string rational_text(const mpq_class& r) { return r.get_str(); }

CycloContext::CycloContext(int q, int p, int m) : q_(q), p_(p), m_(m) {
  if (m % 8 != 0 || (p != 2 && m % (4 * p) != 0))
    throw ConfigError("cyclotomic order m=" + std::to_string(m) + " must be divisible by 8 and 4p");
  cyclo_ = cyclotomic(m);
  phi_ = static_cast<int>(cyclo_.size()) - 1;
  pow_.assign(static_cast<size_t>(m), IPoly(static_cast<size_t>(phi_), 0));
  IPoly cur(static_cast<size_t>(phi_), 0);
  cur[0] = 1;
  for (int k = 0; k < m; ++k) {
    pow_[static_cast<size_t>(k)] = cur;
    long top = cur[static_cast<size_t>(phi_ - 1)];
    for (int i = phi_ - 1; i > 0; --i) cur[static_cast<size_t>(i)] = cur[static_cast<size_t>(i - 1)];
    cur[0] = 0;
    for (int i = 0; i < phi_; ++i) cur[static_cast<size_t>(i)] -= top * cyclo_[static_cast<size_t>(i)];
  }
  // sqrt(p) from the quadratic Gauss sum, or zeta_8 + zeta_8^{-1} for p = 2.
  std::vector<mpq_class> rp = zeros(phi_);
  auto addpow = [&](std::vector<mpq_class>& v, int k, long c) {
    k = ((k % m) + m) % m;
    for (int i = 0; i < phi_; ++i) v[static_cast<size_t>(i)] += c * pow_[static_cast<size_t>(k)][static_cast<size_t>(i)];
  };
  if (p == 2) {
    addpow(rp, m / 8, 1);
    addpow(rp, -m / 8, 1);
  } else {
    std::vector<mpq_class> g = zeros(phi_);
    for (int a = 1; a < p; ++a) addpow(g, a * (m / p), legendre(a, p));
    if (p % 4 == 1) {
      rp = g;
    } else {
      // g = i sqrt(p), so sqrt(p) = -i g.
      std::vector<mpq_class> minus_i = zeros(phi_);
      addpow(minus_i, 3 * (m / 4), 1);
      std::vector<mpq_class> prod = zeros(2 * phi_);
      for (int i = 0; i < phi_; ++i)
        for (int j = 0; j < phi_; ++j) prod[static_cast<size_t>(i + j)] += g[static_cast<size_t>(i)] * minus_i[static_cast<size_t>(j)];
      for (int k = 0; k < 2 * phi_ - 1; ++k)
        for (int i = 0; i < phi_; ++i) rp[static_cast<size_t>(i)] += prod[static_cast<size_t>(k)] * pow_[static_cast<size_t>(k)][static_cast<size_t>(i)];
    }
  }
  int r = 0;
  for (int x = q; x > 1; x /= p) ++r;
  mpq_class scale(1);
  for (int i = 0; i < r / 2; ++i) scale *= p;
  sqrtq_ = zeros(phi_);
  if (r % 2 == 0) {
    sqrtq_[0] = scale;
  } else {
    for (int i = 0; i < phi_; ++i) sqrtq_[static_cast<size_t>(i)] = rp[static_cast<size_t>(i)] * scale;
  }
}

int session_cyclotomic_order(int q, int p, int m_zeta, int max_wild_level) {
  long pe = 1;
  while (pe < max_wild_level + 1) pe *= p;
  long m = lcm_ll(pe, static_cast<long>(q) * q - 1);
  m = lcm_ll(m, m_zeta);
  m = lcm_ll(m, 8);
  m = lcm_ll(m, 4LL * p);
  return static_cast<int>(m);
}

Ctx make_context(int q, int p, int m) { return std::make_shared<const CycloContext>(q, p, m); }

Scalar::Scalar(Ctx ctx) : ctx_(std::move(ctx)), c_(zeros(ctx_->phi())) {}
Scalar::Scalar(Ctx ctx, const mpq_class& r) : Scalar(std::move(ctx)) { c_[0] = r; }
Scalar::Scalar(Ctx ctx, std::vector<mpq_class> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
  if (static_cast<int>(c_.size()) != ctx_->phi()) throw DomainError("coefficient vector length mismatch");
}

Scalar Scalar::root_of_unity(const Ctx& c, int order, long exponent) {
  if (order <= 0 || c->m() % order != 0)
    throw ConfigError("root of unity of order " + std::to_string(order) + " needs m divisible by it; m=" +
                      std::to_string(c->m()));
  long k = (exponent % order + order) % order * (c->m() / order);
  Scalar r(c);
  const auto& pw = c->power(static_cast<int>(k));
  for (int i = 0; i < c->phi(); ++i) r.c_[static_cast<size_t>(i)] = pw[static_cast<size_t>(i)];
  return r;
}

Scalar Scalar::sqrt_q(const Ctx& c) { return Scalar(c, c->sqrt_q()); }

Scalar Scalar::half_power(const Ctx& c, long k) {
  mpq_class qq(c->q());
  mpq_class r(1);
  long a = k >= 0 ? k / 2 : -((-k) / 2);
  for (long i = 0; i < (a >= 0 ? a : -a); ++i) r = a >= 0 ? mpq_class(r * qq) : mpq_class(r / qq);
  Scalar out(c, r);
  if (k % 2 != 0) {
    Scalar s = sqrt_q(c);
    out = k > 0 ? out * s : out * s.inverse();
  }
  return out;
}

Scalar Scalar::from_root_counts(const Ctx& c, const std::vector<mpq_class>& counts) {
  Scalar r(c);
  for (int k = 0; k < c->m(); ++k) {
    const mpq_class& n = counts[static_cast<size_t>(k)];
    if (n == 0) continue;
    const auto& pw = c->power(k);
    for (int i = 0; i < c->phi(); ++i)
      if (pw[static_cast<size_t>(i)] != 0) r.c_[static_cast<size_t>(i)] += n * pw[static_cast<size_t>(i)];
  }
  return r;
}

void Scalar::check(const Scalar& o) const {
  if (!ctx_ || !o.ctx_) throw DomainError("uninitialized Scalar");
  if (ctx_ != o.ctx_ && ctx_->m() != o.ctx_->m()) throw DomainError("Scalar context mismatch");
}

bool Scalar::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const mpq_class& x) { return x == 0; });
}

bool Scalar::is_rational() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](const mpq_class& x) { return x == 0; });
}

Scalar Scalar::operator+(const Scalar& o) const {
  check(o);
  Scalar r(*this);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  check(o);
  Scalar r(*this);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r(*this);
  for (auto& x : r.c_) x = -x;
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  check(o);
  const int n = ctx_->phi();
  std::vector<mpq_class> prod = zeros(2 * n - 1);
  for (int i = 0; i < n; ++i) {
    if (c_[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; j < n; ++j)
      if (o.c_[static_cast<size_t>(j)] != 0) prod[static_cast<size_t>(i + j)] += c_[static_cast<size_t>(i)] * o.c_[static_cast<size_t>(j)];
  }
  Scalar r(ctx_);
  for (int k = 0; k < 2 * n - 1; ++k) {
    if (prod[static_cast<size_t>(k)] == 0) continue;
    if (k < n) {
      r.c_[static_cast<size_t>(k)] += prod[static_cast<size_t>(k)];
      continue;
    }
    const auto& pw = ctx_->power(k);
    for (int i = 0; i < n; ++i)
      if (pw[static_cast<size_t>(i)] != 0) r.c_[static_cast<size_t>(i)] += prod[static_cast<size_t>(k)] * pw[static_cast<size_t>(i)];
  }
  return r;
}

Scalar Scalar::operator*(const mpq_class& s) const {
  Scalar r(*this);
  for (auto& x : r.c_) x *= s;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) { return *this = *this + o; }
Scalar& Scalar::operator*=(const Scalar& o) { return *this = *this * o; }

Scalar Scalar::inverse() const {
  if (!ctx_) throw DomainError("uninitialized Scalar");
  if (is_zero()) throw DomainError("inverse of zero Scalar");
  const int n = ctx_->phi();
  if (is_rational()) return Scalar(ctx_, mpq_class(1 / c_[0]));
  // Solve (multiplication by this) * y = 1.
  std::vector<std::vector<mpq_class>> a(static_cast<size_t>(n), zeros(n + 1));
  for (int j = 0; j < n; ++j) {
    Scalar bj(ctx_);
    bj.c_[static_cast<size_t>(j)] = 1;
    Scalar col = *this * bj;
    for (int i = 0; i < n; ++i) a[static_cast<size_t>(i)][static_cast<size_t>(j)] = col.c_[static_cast<size_t>(i)];
  }
  a[0][static_cast<size_t>(n)] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw DomainError("singular Scalar");
    std::swap(a[static_cast<size_t>(col)], a[static_cast<size_t>(piv)]);
    mpq_class inv = 1 / a[static_cast<size_t>(col)][static_cast<size_t>(col)];
    for (int j = col; j <= n; ++j) a[static_cast<size_t>(col)][static_cast<size_t>(j)] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || a[static_cast<size_t>(r)][static_cast<size_t>(col)] == 0) continue;
      mpq_class f = a[static_cast<size_t>(r)][static_cast<size_t>(col)];
      for (int j = col; j <= n; ++j) a[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(col)][static_cast<size_t>(j)];
    }
  }
  Scalar y(ctx_);
  for (int i = 0; i < n; ++i) y.c_[static_cast<size_t>(i)] = a[static_cast<size_t>(i)][static_cast<size_t>(n)];
  return y;
}

Scalar Scalar::pow(long e) const {
  Scalar base = e < 0 ? inverse() : *this;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  Scalar r = one(ctx_);
  while (k) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  check(o);
  return c_ == o.c_;
}

std::optional<int> Scalar::root_exponent() const {
  for (int k = 0; k < ctx_->m(); ++k) {
    const auto& pw = ctx_->power(k);
    bool eq = true;
    for (int i = 0; i < ctx_->phi() && eq; ++i) eq = c_[static_cast<size_t>(i)] == pw[static_cast<size_t>(i)];
    if (eq) return k;
  }
  return std::nullopt;
}

std::string Scalar::to_text() const {
  std::ostringstream os;
  os << "h=0;[";
  for (size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << rational_text(c_[i]);
  os << "]";
  return os.str();
}

Scalar Scalar::parse(const Ctx& c, const std::string& text) {
  auto semi = text.find(';');
  if (text.rfind("h=", 0) != 0 || semi == std::string::npos) throw DomainError("bad Scalar text: " + text);
  long h = std::stoll(text.substr(2, semi - 2));
  auto lb = text.find('[', semi), rb = text.rfind(']');
  if (lb == std::string::npos || rb == std::string::npos) throw DomainError("bad Scalar text: " + text);
  std::vector<mpq_class> v;
  std::stringstream ss(text.substr(lb + 1, rb - lb - 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    mpq_class x(tok);
    x.canonicalize();
    v.push_back(x);
  }
  if (static_cast<int>(v.size()) != c->phi()) throw DomainError("Scalar text has wrong length");
  return Scalar(c, v) * half_power(c, h);
}

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly LaurentPoly::monomial(const Scalar& c, int e) {
  LaurentPoly p(c.ctx());
  p.add_term(e, c);
  return p;
}

int LaurentPoly::low_degree() const {
  if (t_.empty()) throw DomainError("degree of zero polynomial");
  return t_.begin()->first;
}

int LaurentPoly::high_degree() const {
  if (t_.empty()) throw DomainError("degree of zero polynomial");
  return t_.rbegin()->first;
}

Scalar LaurentPoly::coeff(int e) const {
  auto it = t_.find(e);
  return it == t_.end() ? Scalar::zero(ctx_) : it->second;
}

void LaurentPoly::add_term(int e, const Scalar& c) {
  if (!ctx_) ctx_ = c.ctx();
  auto it = t_.find(e);
  if (it == t_.end()) {
    if (!c.is_zero()) t_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) t_.erase(it);
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  if (!r.ctx_) r.ctx_ = o.ctx_;
  for (const auto& [e, c] : o.t_) r.add_term(e, c);
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + o * -Scalar::one(o.ctx_ ? o.ctx_ : ctx_); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r(ctx_ ? ctx_ : o.ctx_);
  for (const auto& [e1, c1] : t_)
    for (const auto& [e2, c2] : o.t_) r.add_term(e1 + e2, c1 * c2);
  return r;
}

LaurentPoly LaurentPoly::operator*(const Scalar& s) const {
  LaurentPoly r(ctx_ ? ctx_ : s.ctx());
  if (s.is_zero()) return r;
  for (const auto& [e, c] : t_) r.t_.emplace(e, c * s);
  return r;
}

LaurentPoly LaurentPoly::shift(int k) const {
  LaurentPoly r(ctx_);
  for (const auto& [e, c] : t_) r.t_.emplace(e + k, c);
  return r;
}

std::string LaurentPoly::to_text() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [e, c] : t_) {
    os << (first ? "" : " ") << e << ":" << c.to_text();
    first = false;
  }
  os << "}";
  return os.str();
}

LaurentPoly LaurentPoly::parse(const Ctx& c, const std::string& text) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') throw DomainError("bad polynomial text");
  LaurentPoly p(c);
  std::stringstream ss(text.substr(1, text.size() - 2));
  std::string tok;
  while (ss >> tok) {
    auto colon = tok.find(':');
    if (colon == std::string::npos) throw DomainError("bad polynomial term");
    p.add_term(std::stoi(tok.substr(0, colon)), Scalar::parse(c, tok.substr(colon + 1)));
  }
  return p;
}

// ---------------------------------------------------------------- RationalFnX

namespace {

using SPoly = std::vector<Scalar>;  // ascending coefficients

void strip(SPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

SPoly to_poly(const LaurentPoly& p, int low) {
  SPoly r;
  if (p.is_zero()) return r;
  r.assign(static_cast<size_t>(p.high_degree() - low + 1), Scalar::zero(p.ctx()));
  for (const auto& [e, c] : p.terms()) r[static_cast<size_t>(e - low)] = c;
  return r;
}

LaurentPoly from_poly(const Ctx& c, const SPoly& a, int low) {
  LaurentPoly r(c);
  for (size_t i = 0; i < a.size(); ++i) r.add_term(static_cast<int>(i) + low, a[i]);
  return r;
}

// a = qt * b + rem
void divmod(SPoly a, const SPoly& b, SPoly& qt, SPoly& rem) {
  strip(a);
  const Ctx& c = b.back().ctx();
  Scalar inv = b.back().inverse();
  qt.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Scalar::zero(c));
  while (a.size() >= b.size() && !a.empty()) {
    size_t sh = a.size() - b.size();
    Scalar f = a.back() * inv;
    qt[sh] = f;
    for (size_t j = 0; j < b.size(); ++j) a[sh + j] = a[sh + j] - f * b[j];
    a.pop_back();
    strip(a);
  }
  rem = a;
}

SPoly pgcd(SPoly a, SPoly b) {
  strip(a);
  strip(b);
  while (!b.empty()) {
    SPoly qt, r;
    divmod(a, b, qt, r);
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

RationalFnX::RationalFnX(const LaurentPoly& num) : num_(num), den_(LaurentPoly::monomial(Scalar::one(num.ctx()), 0)) {
  if (!num.ctx()) throw DomainError("RationalFnX needs a context");
  canonicalize();
}

RationalFnX::RationalFnX(const LaurentPoly& num, const LaurentPoly& den) : num_(num), den_(den) {
  if (den.is_zero()) throw DomainError("zero denominator");
  if (!num_.ctx()) num_ = LaurentPoly(den.ctx());
  canonicalize();
}

RationalFnX RationalFnX::monomial(const Scalar& c, int e) { return RationalFnX(LaurentPoly::monomial(c, e)); }

void RationalFnX::canonicalize() {
  const Ctx c = den_.ctx();
  if (num_.is_zero()) {
    num_ = LaurentPoly(c);
    den_ = LaurentPoly::monomial(Scalar::one(c), 0);
    return;
  }
  int dl = den_.low_degree();
  int nl = num_.low_degree();
  SPoly d = to_poly(den_, dl);
  SPoly n = to_poly(num_, nl);
  int shift = nl - dl;
  SPoly g = pgcd(n, d);
  if (g.size() > 1) {
    SPoly qt, r;
    divmod(n, g, qt, r);
    n = qt;
    divmod(d, g, qt, r);
    d = qt;
  }
  Scalar inv = d[0].inverse();
  for (auto& x : d) x = x * inv;
  for (auto& x : n) x = x * inv;
  num_ = from_poly(c, n, shift);
  den_ = from_poly(c, d, 0);
}

RationalFnX RationalFnX::operator+(const RationalFnX& o) const {
  return RationalFnX(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFnX RationalFnX::operator*(const RationalFnX& o) const { return RationalFnX(num_ * o.num_, den_ * o.den_); }

RationalFnX RationalFnX::operator*(const Scalar& s) const { return RationalFnX(num_ * s, den_); }

RationalFnX RationalFnX::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero rational function");
  return RationalFnX(den_, num_);
}

RationalFnX RationalFnX::operator/(const RationalFnX& o) const { return *this * o.inverse(); }

RationalFnX RationalFnX::pow(int e) const {
  RationalFnX base = e < 0 ? inverse() : *this;
  RationalFnX r = monomial(Scalar::one(den_.ctx()), 0);
  for (int i = 0; i < (e < 0 ? -e : e); ++i) r = r * base;
  return r;
}

RationalFnX RationalFnX::reflect(const Scalar& cst) const {
  auto sub = [&](const LaurentPoly& p) {
    LaurentPoly r(den_.ctx());
    for (const auto& [e, co] : p.terms()) r.add_term(-e, co * cst.pow(e));
    return r;
  };
  return RationalFnX(sub(num_), sub(den_));
}

std::string RationalFnX::to_text() const { return num_.to_text() + "/" + den_.to_text(); }

RationalFnX RationalFnX::parse(const Ctx& c, const std::string& text) {
  auto mid = text.find("}/{");
  if (mid == std::string::npos) throw DomainError("bad rational function text");
  return RationalFnX(LaurentPoly::parse(c, text.substr(0, mid + 1)), LaurentPoly::parse(c, text.substr(mid + 2)));
}

void RootSum::add(int xexp, int root, const mpq_class& w) {
  const int m = ctx_->m();
  auto& v = acc_[xexp];
  if (v.empty()) v.assign(static_cast<size_t>(m), mpq_class(0));
  v[static_cast<size_t>(((root % m) + m) % m)] += w;
}

void RootSum::merge(const RootSum& o) {
  if (!ctx_) ctx_ = o.ctx_;
  for (const auto& [e, v] : o.acc_) {
    auto& mine = acc_[e];
    if (mine.empty()) mine.assign(v.size(), mpq_class(0));
    for (size_t i = 0; i < v.size(); ++i) mine[i] += v[i];
  }
}

LaurentPoly RootSum::to_poly() const {
  LaurentPoly p(ctx_);
  for (const auto& [e, v] : acc_) p.add_term(e, Scalar::from_root_counts(ctx_, v));
  return p;
}

std::optional<GammaMonomial> as_monomial(const RationalFnX& f) {
  if (f.is_zero()) throw DomainError("as_monomial of zero");
  if (f.num().terms().size() != 1 || f.den().terms().size() != 1) return std::nullopt;
  const auto& [e, c] = *f.num().terms().begin();
  return GammaMonomial{c, e};
}

}  // namespace gammalab
