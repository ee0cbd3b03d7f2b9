#include "gammalab/whittaker.hpp"

#include <stdexcept>

namespace gammalab {

namespace {

int mod(long a, long n) {
  long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

bool exact_zero(const FieldElem& x) { return x.is_zero() && x.exact(); }

std::optional<int> det_val(const LocalMatrix& g) {
  FieldElem d = g.det();
  if (d.is_zero() && !d.exact()) throw PrecisionError("determinant is zero within precision");
  return d.val();
}

// All lattice representatives of (1 + L1)/(1 + L2) as additive offsets, entrywise.
std::vector<LocalMatrix> lattice_offsets(const Session& s, const Lattice& L1, const Lattice& L2) {
  std::vector<LocalMatrix> out{LocalMatrix::identity(s.f(), L1.n)};
  const int q = s.q();
  for (int i = 0; i < L1.n; ++i)
    for (int j = 0; j < L1.n; ++j)
      for (int e = L1.bound(i, j); e < L2.bound(i, j); ++e) {
        std::vector<LocalMatrix> next;
        next.reserve(out.size() * static_cast<size_t>(q));
        for (const auto& m : out)
          for (int c = 0; c < q; ++c) {
            LocalMatrix x = m;
            if (c) x.at(i, j) = x.at(i, j) + FieldElem::monomial(s.f(), static_cast<fq_t>(c), e);
            next.push_back(std::move(x));
          }
        out = std::move(next);
      }
  return out;
}

}  // namespace

std::optional<NUReduction> reduce_NU(const Session& s, const LocalMatrix& G, const Lattice& L, int sign) {
  const int n = G.n();
  LocalMatrix y = G;
  LocalMatrix nm = LocalMatrix::identity(s.f(), n);
  std::vector<FieldElem> pinv(static_cast<size_t>(n));
  const FieldElem one = FieldElem::constant(s.f(), 1);
  for (int i = n - 1; i >= 0; --i) {
    for (int j = n - 1; j > i; --j) {
      if (exact_zero(y.at(i, j))) continue;
      FieldElem c = y.at(i, j) * pinv[static_cast<size_t>(j)];
      for (int l = 0; l < j; ++l)
        if (!exact_zero(y.at(j, l))) y.at(i, l) = y.at(i, l) - c * y.at(j, l);
      y.at(i, j) = FieldElem(s.f());
      nm.at(i, j) = c;
    }
    for (int l = 0; l < i; ++l)
      if (!y.at(i, l).in_ideal(L.bound(i, l))) return std::nullopt;
    if (L.bound(i, i) < 1) throw ConfigError("reduce_NU needs a lattice inside the radical");
    if (!(y.at(i, i) - one).in_ideal(L.bound(i, i))) return std::nullopt;
    pinv[static_cast<size_t>(i)] = y.at(i, i).inverse(s.precision);
  }
  FieldElem sup(s.f());
  for (int i = 0; i + 1 < n; ++i) sup = sup + nm.at(i, i + 1);
  int e = psi_exponent(s, sup);
  return NUReduction{nm, y, sign > 0 ? e : mod(-e, s.C->m())};
}

std::optional<WhittakerSym> whittaker_middle(const MiddleStratum& st, const LocalMatrix& g) {
  const Session& s = st.session();
  const int N = s.N, n = 2 * N;
  auto vd = det_val(g);
  if (!vd) return std::nullopt;
  if (*vd % st.beta_det_val() != 0) return std::nullopt;
  const int k = *vd / st.beta_det_val();
  if (k < -MiddleStratum::kMaxPower || k > MiddleStratum::kMaxPower) return std::nullopt;
  LocalMatrix g0 = g * st.beta_power(-k);
  // The last row of g0 is the last row of y j0: it carries the residue of j0.
  fq_t x1 = g0.at(n - 1, N - 1).coeff(1);
  fq_t r = g0.at(n - 1, n - 1).coeff(0);
  const FqContext& F = *s.f();
  fq_t x0 = F.sub(r, F.mul(x1, st.d_bar()));
  if (x0 == 0 && x1 == 0) return std::nullopt;
  const auto& rep = st.unit_reps()[static_cast<size_t>(st.residue_field().index({x0, x1}))];
  auto red = reduce_NU(s, g0 * rep.j_inv, st.u1());
  if (!red) return std::nullopt;
  return WhittakerSym{mod(red->psi_n_exp + st.psi_beta_exp(red->y), s.C->m()), k, rep.log};
}

std::optional<WhittakerSym> whittaker_simple(const SimpleStratum& st, const LocalMatrix& g, int sign) {
  const Session& s = st.session();
  const int N = s.N;
  auto vd = det_val(g);
  if (!vd) return std::nullopt;
  const int k = *vd / st.beta_det_val();
  if (k < -SimpleStratum::kMaxPower || k > SimpleStratum::kMaxPower) return std::nullopt;
  LocalMatrix g0 = g * st.beta_power(-k);
  fq_t a = g0.at(N - 1, N - 1).coeff(0);
  if (a == 0) return std::nullopt;
  LocalMatrix ainv = LocalMatrix::scalar(FieldElem::constant(s.f(), s.f()->inv(a)), N);
  auto red = reduce_NU(s, g0 * ainv, st.u1(), sign);
  if (!red) return std::nullopt;
  return WhittakerSym{mod(red->psi_n_exp + st.psi_beta_exp(red->y, sign), s.C->m()), k, s.f()->log(a)};
}

Scalar whittaker_value(const MiddleParams& p, const LocalMatrix& g) {
  const Session& s = p.stratum->session();
  auto w = whittaker_middle(*p.stratum, g);
  if (!w) return Scalar::zero(s.C);
  return lambda_value(s, p, LambdaSym{w->k, w->unit_log, w->psi_root});
}

Scalar whittaker_value(const SimpleParams& p, const LocalMatrix& g, int sign) {
  const Session& s = p.stratum->session();
  auto w = whittaker_simple(*p.stratum, g, sign);
  if (!w) return Scalar::zero(s.C);
  return lambda_value(s, p, LambdaSym{w->k, w->unit_log, w->psi_root});
}

LocalMatrix tilde_argument(const LocalMatrix& g, int rel_prec) {
  return w_long(g.field(), g.n()) * g.inverse(rel_prec).transpose();
}

LocalMatrix alpha_matrix(const LocalMatrix& h, const std::vector<FieldElem>& y, const LocalMatrix& g0) {
  const int m = h.n(), n = g0.n(), r = n - m - 1;
  if (r < 0 || static_cast<int>(y.size()) != m * r) throw ConfigError("alpha_matrix: shape mismatch");
  const FqContext* F = h.field();
  LocalMatrix a(F, n);
  a.at(0, m) = FieldElem::constant(F, 1);
  for (int i = 0; i < r; ++i) a.at(1 + i, m + 1 + i) = FieldElem::constant(F, 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) a.at(r + 1 + i, j) = h.at(i, j);
    for (int j = 0; j < r; ++j) {
      FieldElem acc(F);
      for (int l = 0; l < m; ++l) acc = acc + h.at(i, l) * y[static_cast<size_t>(l * r + j)];
      a.at(r + 1 + i, m + 1 + j) = acc;
    }
  }
  return a * g0;
}

LocalMatrix alpha_gl1(const Session& s, const FieldElem& h, const std::vector<FieldElem>& x) {
  const int n = 2 * s.N;
  if (static_cast<int>(x.size()) != n - 2) throw ConfigError("alpha_gl1: need 2N-2 coordinates");
  // Column 2 + j of the last row carries -x_{2N-2-j} h^{-1}.
  std::vector<FieldElem> y;
  for (int j = 0; j < n - 2; ++j) y.push_back(-x[static_cast<size_t>(n - 3 - j)]);
  LocalMatrix hi(s.f(), 1);
  hi.at(0, 0) = h.inverse(s.precision);
  return alpha_matrix(hi, y, LocalMatrix::identity(s.f(), n));
}

std::optional<Gl1Support> support_alpha_gl1(const MiddleStratum& st, const FieldElem& h,
                                            const std::vector<FieldElem>& x) {
  const Session& s = st.session();
  const int N = s.N, n = 2 * N;
  const MiddleLift& f = st.lift();
  FieldElem hinv = h.inverse(s.precision);
  FieldElem e = (hinv * f.c.inverse(s.precision)).shift(-2);
  if (!(e - FieldElem::constant(s.f(), 1)).in_ideal(1)) return std::nullopt;
  for (int i = 1; i <= n - 2; ++i) {
    int bound = (i >= N && i <= n - 2) ? 0 : -1;
    if (!x[static_cast<size_t>(i - 1)].in_ideal(bound)) return std::nullopt;
  }
  Gl1Support w;
  w.u = LocalMatrix::identity(s.f(), n);
  w.u.at(N - 1, n - 1) = f.d.shift(-1);
  w.k = -1;
  LocalMatrix alpha = alpha_gl1(s, h, x);
  w.z = LocalMatrix::identity(s.f(), n);
  FieldElem cw = f.c.shift(-2);
  for (int j = 0; j < n; ++j) w.z.at(0, j) = cw * alpha.at(n - 1, j);
  return w;
}

std::optional<GlNSupport> support_alpha_glN(const MiddleStratum& st, const FieldElem& u, const LocalMatrix& h,
                                           const std::vector<FieldElem>& y) {
  const Session& s = st.session();
  const int N = s.N, n = 2 * N;
  const FqContext& F = *s.f();
  fq_t ub = u.residue();
  fq_t den = F.sub(F.add(F.mul(st.c_bar(), F.mul(ub, ub)), F.mul(st.d_bar(), ub)), 1);
  fq_t a = F.div(ub, den);
  FieldElem scal = (FieldElem::constant(s.f(), a) * u).shift(2);
  LocalMatrix hs = h * LocalMatrix::scalar(scal.inverse(s.precision), N);
  // h is a coset in N(N)\GL(N).
  if (!reduce_NU(s, hs, radical_J(N, 1))) return std::nullopt;
  Lattice b1 = radical_A2N(N, 1);
  // The entry below the varpi^{-1} of g_u must cancel it: y_{N-1,0} = (u varpi)^{-1} mod the pattern.
  FieldElem shift = u.inverse(s.precision).shift(-1);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N - 1; ++j) {
      FieldElem e = y[static_cast<size_t>(i * (N - 1) + j)];
      if (i == N - 1 && j == 0) e = e - shift;
      if (!e.in_ideal(b1.bound(i, N + 1 + j))) return std::nullopt;
    }
  LocalMatrix alpha = alpha_matrix(h, y, g_u(s, u));
  FieldElem a0 = FieldElem::constant(s.f(), F.mul(a, ub));
  FieldElem a1 = FieldElem::constant(s.f(), a);
  OLElem inv = ol_inverse(st.lift(), OLElem{a0, a1}, s.precision);
  LocalMatrix j0 = embed_OL(s, st.lift(), a0, a1);
  LocalMatrix j0inv = embed_OL(s, st.lift(), inv.a0, inv.a1);
  auto red = reduce_NU(s, alpha * st.beta_power(N) * j0inv, st.u1());
  if (!red) throw std::logic_error("support_alpha_glN: predicate holds but no factorization exists");
  GlNSupport w;
  w.n = red->n;
  w.k = -N;
  w.j = st.beta_power(N) * red->y * j0 * st.beta_power(-N);
  w.a = a;
  (void)n;
  return w;
}

std::vector<MembershipWitness> membership_oracle(const MiddleStratum& st, const LocalMatrix& g, int kmin, int kmax,
                                                 int m) {
  const Session& s = st.session();
  if (m < 1) throw ConfigError("membership_oracle: quotient depth must be positive");
  Lattice b1 = radical_A2N(s.N, 1), bm = radical_A2N(s.N, m);
  std::vector<LocalMatrix> offs = lattice_offsets(s, b1, bm);
  std::vector<LocalMatrix> offs_inv;
  offs_inv.reserve(offs.size());
  for (const auto& o : offs) offs_inv.push_back(o.inverse(s.precision));
  std::vector<MembershipWitness> out;
  auto vd = det_val(g);
  for (int k = kmin; k <= kmax; ++k) {
    // det of N U^m is a unit.
    if (!vd || *vd + 2 * k != 0) continue;
    const LocalMatrix& bk = st.beta_power(-k);
    for (const auto& rep : st.unit_reps()) {
      if (rep.j.n() == 0) continue;
      bool hit = false;
      for (size_t r = 0; r < offs.size() && !hit; ++r) {
        LocalMatrix G = g * offs_inv[r] * rep.j_inv * bk;
        if (reduce_NU(s, G, bm)) hit = true;
      }
      if (hit) out.push_back(MembershipWitness{k, rep.log});
    }
  }
  return out;
}

}  // namespace gammalab
