#include "gammalab/localfield.hpp"
#include "gammalab/scalars.hpp"

#include <algorithm>
#include <sstream>

namespace gammalab {

namespace {

int smallest_prime_factor(int n) {
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

}  // namespace

FqContext::FqContext(int q) : q_(q) {
  if (q < 2 || q > 256) throw std::invalid_argument("q must be a prime power in [2, 256]");
  p_ = smallest_prime_factor(q);
  r_ = 0;
  for (int x = q; x > 1; x /= p_) {
    if (x % p_ != 0) throw std::invalid_argument("q must be a prime power");
    ++r_;
  }
  const int Q = q_;
  add_.assign(static_cast<size_t>(Q * Q), 0);
  mul_.assign(static_cast<size_t>(Q * Q), 0);
  neg_.assign(static_cast<size_t>(Q), 0);
  // digits of an element index
  auto digits = [&](int a) {
    std::vector<int> d(static_cast<size_t>(r_));
    for (int i = 0; i < r_; ++i, a /= p_) d[static_cast<size_t>(i)] = a % p_;
    return d;
  };
  auto undigits = [&](const std::vector<int>& d) {
    int a = 0;
    for (int i = r_ - 1; i >= 0; --i) a = a * p_ + d[static_cast<size_t>(i)];
    return a;
  };
  for (int a = 0; a < Q; ++a) {
    auto da = digits(a);
    std::vector<int> n(static_cast<size_t>(r_));
    for (int i = 0; i < r_; ++i) n[static_cast<size_t>(i)] = (p_ - da[static_cast<size_t>(i)]) % p_;
    neg_[static_cast<size_t>(a)] = static_cast<fq_t>(undigits(n));
    for (int b = 0; b < Q; ++b) {
      auto db = digits(b);
      std::vector<int> s(static_cast<size_t>(r_));
      for (int i = 0; i < r_; ++i) s[static_cast<size_t>(i)] = (da[static_cast<size_t>(i)] + db[static_cast<size_t>(i)]) % p_;
      add_[static_cast<size_t>(a * Q + b)] = static_cast<fq_t>(undigits(s));
    }
  }
  // Multiplication modulo the first primitive polynomial m(y) of degree r.
  auto mul_mod = [&](int a, int b, const std::vector<int>& mod) {
    auto da = digits(a), db = digits(b);
    std::vector<int> prod(static_cast<size_t>(2 * r_), 0);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < r_; ++j)
        prod[static_cast<size_t>(i + j)] = (prod[static_cast<size_t>(i + j)] + da[static_cast<size_t>(i)] * db[static_cast<size_t>(j)]) % p_;
    for (int k = 2 * r_ - 1; k >= r_; --k) {
      int c = prod[static_cast<size_t>(k)];
      if (!c) continue;
      prod[static_cast<size_t>(k)] = 0;
      for (int i = 0; i < r_; ++i)
        prod[static_cast<size_t>(k - r_ + i)] = ((prod[static_cast<size_t>(k - r_ + i)] - c * mod[static_cast<size_t>(i)]) % p_ + p_) % p_;
    }
    prod.resize(static_cast<size_t>(r_));
    return undigits(prod);
  };
  std::vector<int> mod(static_cast<size_t>(r_), 0);
  int gen = -1;
  if (r_ == 1) {
    for (int a = 0; a < Q; ++a)
      for (int b = 0; b < Q; ++b) mul_[static_cast<size_t>(a * Q + b)] = static_cast<fq_t>(a * b % p_);
    for (int g = 1; g < Q && gen < 0; ++g) {
      int x = 1, ord = 0;
      do {
        x = x * g % p_;
        ++ord;
      } while (x != 1);
      if (ord == Q - 1) gen = g;
    }
  } else {
    int total = 1;
    for (int i = 0; i < r_; ++i) total *= p_;
    for (int code = 0; code < total && gen < 0; ++code) {
      int c = code;
      for (int i = 0; i < r_; ++i, c /= p_) mod[static_cast<size_t>(i)] = c % p_;
      if (mod[0] == 0) continue;
      // y is primitive iff its multiplicative order is q-1.
      int y = p_;  // index of y
      int x = 1, ord = 0;
      do {
        x = mul_mod(x, y, mod);
        ++ord;
      } while (x != 1 && ord < Q);
      if (ord == Q - 1) gen = y;
    }
    for (int a = 0; a < Q; ++a)
      for (int b = 0; b < Q; ++b) mul_[static_cast<size_t>(a * Q + b)] = static_cast<fq_t>(mul_mod(a, b, mod));
  }
  gen_ = static_cast<fq_t>(gen);
  log_.assign(static_cast<size_t>(Q), -1);
  exp_.assign(static_cast<size_t>(Q - 1), 0);
  int x = 1;
  for (int k = 0; k < Q - 1; ++k) {
    exp_[static_cast<size_t>(k)] = static_cast<fq_t>(x);
    log_[static_cast<size_t>(x)] = k;
    x = mul_[static_cast<size_t>(x * Q + gen_)];
  }
  inv_.assign(static_cast<size_t>(Q), 0);
  for (int a = 1; a < Q; ++a) inv_[static_cast<size_t>(a)] = exp_[static_cast<size_t>((Q - 1 - log_[static_cast<size_t>(a)]) % (Q - 1))];
  trace_.assign(static_cast<size_t>(Q), 0);
  for (int a = 0; a < Q; ++a) {
    int s = 0, y = a;
    for (int i = 0; i < r_; ++i) {
      s = add_[static_cast<size_t>(s * Q + y)];
      y = pow(static_cast<fq_t>(y), p_);
    }
    trace_[static_cast<size_t>(a)] = s;  // lies in the prime field, whose indices are 0..p-1
  }
}

fq_t FqContext::inv(fq_t a) const {
  if (a == 0) throw std::domain_error("inverse of 0 in F_q");
  return inv_[a];
}

fq_t FqContext::pow(fq_t a, long long e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  long long k = (static_cast<long long>(log_[a]) * (e % (q_ - 1)) % (q_ - 1) + (q_ - 1)) % (q_ - 1);
  return exp_[static_cast<size_t>(k)];
}

int FqContext::log(fq_t a) const {
  if (a == 0) throw std::domain_error("log of 0 in F_q");
  return log_[a];
}

fq_t FqContext::exp(long long k) const { return exp_[static_cast<size_t>(((k % (q_ - 1)) + (q_ - 1)) % (q_ - 1))]; }

fq_t FqContext::from_int(long long n) const {
  n = ((n % p_) + p_) % p_;
  return static_cast<fq_t>(n);
}

// ---------------------------------------------------------------- Fq2

bool Fq2Context::irreducible(const FqContext& F, fq_t c, fq_t d) {
  for (int x = 0; x < F.q(); ++x) {
    fq_t xx = static_cast<fq_t>(x);
    fq_t v = F.sub(F.sub(F.mul(xx, xx), F.mul(d, xx)), c);
    if (v == 0) return false;
  }
  return true;
}

Fq2Context::Fq2Context(const FqContext& F, fq_t c, fq_t d) : F_(F), c_(c), d_(d) {
  if (!irreducible(F, c, d)) throw std::invalid_argument("fbar reducible over F_q");
  const int n = order();
  for (int i = 1; i < F.q() * F.q(); ++i) {
    El g = from_index(i);
    El x{1, 0};
    int ord = 0;
    do {
      x = mul(x, g);
      ++ord;
    } while (!(x == El{1, 0}));
    if (ord == n) {
      gen_ = g;
      break;
    }
  }
  log_.assign(static_cast<size_t>(F.q() * F.q()), -1);
  exp_.assign(static_cast<size_t>(n), El{});
  El x{1, 0};
  for (int k = 0; k < n; ++k) {
    exp_[static_cast<size_t>(k)] = x;
    log_[static_cast<size_t>(index(x))] = k;
    x = mul(x, gen_);
  }
}

Fq2Context::El Fq2Context::add(El a, El b) const { return El{F_.add(a.x0, b.x0), F_.add(a.x1, b.x1)}; }

Fq2Context::El Fq2Context::mul(El a, El b) const {
  // X^2 = d X + c
  fq_t hi = F_.mul(a.x1, b.x1);
  fq_t x0 = F_.add(F_.mul(a.x0, b.x0), F_.mul(hi, c_));
  fq_t x1 = F_.add(F_.add(F_.mul(a.x0, b.x1), F_.mul(a.x1, b.x0)), F_.mul(hi, d_));
  return El{x0, x1};
}

Fq2Context::El Fq2Context::frobenius(El a) const {
  // conj(X) = d - X
  return El{F_.add(a.x0, F_.mul(a.x1, d_)), F_.neg(a.x1)};
}

fq_t Fq2Context::norm(El a) const { return mul(a, frobenius(a)).x0; }
fq_t Fq2Context::trace(El a) const { return add(a, frobenius(a)).x0; }

Fq2Context::El Fq2Context::inv(El a) const {
  fq_t n = norm(a);
  if (n == 0) throw std::domain_error("inverse of 0 in F_q2");
  El f = frobenius(a);
  fq_t ni = F_.inv(n);
  return El{F_.mul(f.x0, ni), F_.mul(f.x1, ni)};
}

int Fq2Context::log(El a) const {
  int l = log_[static_cast<size_t>(index(a))];
  if (l < 0) throw std::domain_error("log of 0 in F_q2");
  return l;
}

Fq2Context::El Fq2Context::exp(long long k) const {
  const long long n = order();
  return exp_[static_cast<size_t>(((k % n) + n) % n)];
}

// ---------------------------------------------------------------- FieldElem

FieldElem FieldElem::constant(const FqContext* F, fq_t c) { return monomial(F, c, 0); }

FieldElem FieldElem::monomial(const FqContext* F, fq_t c, int k) {
  FieldElem x(F);
  if (c != 0) {
    x.lo_ = k;
    x.co_.push_back(c);
  }
  return x;
}

FieldElem FieldElem::from_coeffs(const FqContext* F, int lo, std::vector<fq_t> co, int prec) {
  FieldElem x(F, prec);
  x.lo_ = lo;
  x.co_ = std::move(co);
  x.normalize();
  return x;
}

void FieldElem::normalize() {
  size_t first = 0;
  while (first < co_.size() && co_[first] == 0) ++first;
  if (first) {
    co_.erase(co_.begin(), co_.begin() + static_cast<long>(first));
    lo_ += static_cast<int>(first);
  }
  if (!exact() && !co_.empty()) {
    long keep = static_cast<long>(prec_) - lo_;
    if (keep <= 0) co_.clear();
    else if (static_cast<long>(co_.size()) > keep) co_.resize(static_cast<size_t>(keep));
  }
  while (!co_.empty() && co_.back() == 0) co_.pop_back();
  if (co_.empty()) lo_ = 0;
}

std::optional<int> FieldElem::val() const {
  if (co_.empty()) return std::nullopt;
  return lo_;
}

fq_t FieldElem::coeff(int k) const {
  if (k >= prec_) throw PrecisionError("coefficient of t^" + std::to_string(k) + " beyond precision " + std::to_string(prec_));
  if (co_.empty() || k < lo_ || k >= lo_ + static_cast<int>(co_.size())) return 0;
  return co_[static_cast<size_t>(k - lo_)];
}

fq_t FieldElem::residue() const {
  if (!co_.empty() && lo_ < 0) throw DomainError("residue of a non-integral element");
  return coeff(0);
}

bool FieldElem::in_ideal(int b) const {
  if (!co_.empty()) return lo_ >= b;
  if (prec_ >= b) return true;
  throw PrecisionError("cannot decide membership in P^" + std::to_string(b) + " at precision " + std::to_string(prec_));
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
  const FqContext* F = F_ ? F_ : o.F_;
  FieldElem r(F, std::min(prec_, o.prec_));
  if (co_.empty() && o.co_.empty()) return r;
  if (co_.empty()) {
    r.lo_ = o.lo_;
    r.co_ = o.co_;
  } else if (o.co_.empty()) {
    r.lo_ = lo_;
    r.co_ = co_;
  } else {
    int lo = std::min(lo_, o.lo_);
    int hi = std::max(lo_ + static_cast<int>(co_.size()), o.lo_ + static_cast<int>(o.co_.size()));
    if (!r.exact()) hi = std::min(hi, r.prec_);
    if (hi <= lo) return r;
    r.lo_ = lo;
    r.co_.assign(static_cast<size_t>(hi - lo), 0);
    for (size_t i = 0; i < co_.size(); ++i) {
      int k = lo_ + static_cast<int>(i) - lo;
      if (k < hi - lo) r.co_[static_cast<size_t>(k)] = co_[i];
    }
    for (size_t i = 0; i < o.co_.size(); ++i) {
      int k = o.lo_ + static_cast<int>(i) - lo;
      if (k < hi - lo) r.co_[static_cast<size_t>(k)] = F->add(r.co_[static_cast<size_t>(k)], o.co_[i]);
    }
  }
  r.normalize();
  return r;
}

FieldElem FieldElem::operator-() const {
  FieldElem r(*this);
  for (auto& c : r.co_) c = F_->neg(c);
  return r;
}

FieldElem FieldElem::operator-(const FieldElem& o) const { return *this + (-o); }

FieldElem FieldElem::operator*(const FieldElem& o) const {
  const FqContext* F = F_ ? F_ : o.F_;
  long p1 = exact() || o.val_bound() >= kExact ? kExact : static_cast<long>(prec_) + o.val_bound();
  long p2 = o.exact() || val_bound() >= kExact ? kExact : static_cast<long>(o.prec_) + val_bound();
  long pr = std::min<long>(std::min(p1, p2), kExact);
  FieldElem r(F, static_cast<int>(pr));
  if (co_.empty() || o.co_.empty()) return r;
  int lo = lo_ + o.lo_;
  size_t n = co_.size() + o.co_.size() - 1;
  if (!r.exact()) {
    long keep = pr - lo;
    if (keep <= 0) return r;
    n = std::min<size_t>(n, static_cast<size_t>(keep));
  }
  r.lo_ = lo;
  r.co_.assign(n, 0);
  for (size_t i = 0; i < co_.size() && i < n; ++i) {
    if (!co_[i]) continue;
    for (size_t j = 0; j < o.co_.size() && i + j < n; ++j)
      if (o.co_[j]) r.co_[i + j] = F->add(r.co_[i + j], F->mul(co_[i], o.co_[j]));
  }
  r.normalize();
  return r;
}

FieldElem FieldElem::scale(fq_t c) const {
  if (c == 0) return FieldElem(F_, prec_ >= kExact ? kExact : prec_);
  FieldElem r(*this);
  for (auto& x : r.co_) x = F_->mul(x, c);
  return r;
}

FieldElem FieldElem::shift(int k) const {
  FieldElem r(*this);
  if (!r.exact()) r.prec_ += k;
  if (!r.co_.empty()) r.lo_ += k;
  return r;
}

FieldElem FieldElem::inverse(int rel_prec) const {
  if (co_.empty()) throw PrecisionError("inverse of an element that is zero within precision");
  const int v = lo_;
  if (co_.size() == 1 && exact()) return monomial(F_, F_->inv(co_[0]), -v);
  int R = exact() ? rel_prec : std::min(rel_prec, prec_ - v);
  FieldElem r(F_, -v + R);
  r.lo_ = -v;
  r.co_.assign(static_cast<size_t>(R), 0);
  fq_t a0i = F_->inv(co_[0]);
  for (int k = 0; k < R; ++k) {
    fq_t s = k == 0 ? 1 : 0;
    for (int j = 1; j <= k && j < static_cast<int>(co_.size()); ++j)
      s = F_->sub(s, F_->mul(co_[static_cast<size_t>(j)], r.co_[static_cast<size_t>(k - j)]));
    r.co_[static_cast<size_t>(k)] = F_->mul(s, a0i);
  }
  r.normalize();
  return r;
}

FieldElem FieldElem::truncate(int prec) const {
  if (prec >= prec_) return *this;
  FieldElem r(*this);
  r.prec_ = prec;
  r.normalize();
  return r;
}

bool FieldElem::agrees(const FieldElem& o) const {
  int p = std::min(prec_, o.prec_);
  FieldElem a = truncate(p), b = o.truncate(p);
  return a.lo_ == b.lo_ && a.co_ == b.co_;
}

std::string FieldElem::to_text() const {
  std::ostringstream os;
  if (co_.empty()) {
    os << "0";
  } else {
    os << "t^" << lo_ << "*(";
    for (size_t i = 0; i < co_.size(); ++i) {
      if (i) os << " + ";
      os << static_cast<int>(co_[i]);
      if (i == 1) os << "*t";
      else if (i > 1) os << "*t^" << i;
    }
    os << ")";
  }
  if (!exact()) os << " mod t^" << prec_;
  return os.str();
}

FieldElem FieldElem::parse(const FqContext* F, const std::string& text) {
  std::string body = text;
  int prec = kExact;
  auto m = text.find(" mod t^");
  if (m != std::string::npos) {
    prec = std::stoi(text.substr(m + 7));
    body = text.substr(0, m);
  }
  if (body == "0") return FieldElem(F, prec);
  if (body.rfind("t^", 0) != 0) throw std::invalid_argument("bad FieldElem text: " + text);
  auto star = body.find("*(");
  int lo = std::stoi(body.substr(2, star - 2));
  std::string inner = body.substr(star + 2, body.size() - star - 3);
  std::vector<fq_t> co;
  std::stringstream ss(inner);
  std::string term;
  while (std::getline(ss, term, '+')) {
    auto b = term.find_first_not_of(' ');
    co.push_back(static_cast<fq_t>(std::stoi(term.substr(b))));
  }
  return from_coeffs(F, lo, std::move(co), prec);
}

}  // namespace gammalab
