#include "gammalab/rankin.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

namespace gammalab {

namespace {

int mod(long a, long n) {
  long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

mpq_class q_power(int q, long e) {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? mpq_class(z) : mpq_class(1) / mpq_class(z);
}

// Every combination of the given digit slots, as additive offsets.
// slot = (entry index, exponent); each slot takes the q values of F_q.
std::vector<std::vector<FieldElem>> digit_combinations(const Session& s, int entries,
                                                       const std::vector<std::pair<int, int>>& slots) {
  std::vector<std::vector<FieldElem>> out{std::vector<FieldElem>(static_cast<size_t>(entries), FieldElem(s.f()))};
  for (const auto& [idx, e] : slots) {
    std::vector<std::vector<FieldElem>> next;
    next.reserve(out.size() * static_cast<size_t>(s.q()));
    for (const auto& v : out)
      for (int c = 0; c < s.q(); ++c) {
        auto w = v;
        if (c) w[static_cast<size_t>(idx)] = w[static_cast<size_t>(idx)] + FieldElem::monomial(s.f(), static_cast<fq_t>(c), e);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

struct HCell {
  LocalMatrix h;
  int v = 0;
  int mu_log = 0;  // log of the scalar residue (m = 1)
};

// h = varpi^v diag(mu) l, l over lower triangular representatives of U^1(J_m)/U^depth(J_m).
std::vector<HCell> h_cells(const Session& s, int m, const IntegrationConfig& cfg, int depth) {
  Lattice b1 = radical_J(m, 1);
  Lattice bd = radical_J(m, m * (depth - 1) + 1);
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j)
      for (int e = b1.bound(i, j); e < bd.bound(i, j); ++e) slots.emplace_back(i * m + j, e);
  auto lows = digit_combinations(s, m * m, slots);
  const int q = s.q();
  std::vector<std::vector<int>> tori{{}};
  for (int i = 0; i < m; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& t : tori)
      for (int l = 0; l < q - 1; ++l) {
        auto u = t;
        u.push_back(l);
        next.push_back(u);
      }
    tori = std::move(next);
  }
  std::vector<HCell> out;
  for (int v = cfg.vmin; v <= cfg.vmax; ++v)
    for (const auto& t : tori)
      for (const auto& low : lows) {
        LocalMatrix h(s.f(), m);
        for (int i = 0; i < m; ++i) {
          FieldElem d = FieldElem::monomial(s.f(), s.f()->exp(t[static_cast<size_t>(i)]), v);
          for (int j = 0; j <= i; ++j) {
            FieldElem e = low[static_cast<size_t>(i * m + j)];
            if (i == j) e = e + FieldElem::constant(s.f(), 1);
            h.at(i, j) = d * e;
          }
        }
        out.push_back(HCell{h, v, t[0]});
      }
  return out;
}

// vol(U^1(J_m)) * gl_scale / #cells, the measure of one h cell.
mpq_class h_cell_weight(const Session& s, int m, int depth, const mpq_class& gl_scale) {
  Lattice b1 = radical_J(m, 1);
  Lattice bd = radical_J(m, m * (depth - 1) + 1);
  long lower_slots = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) lower_slots += bd.bound(i, j) - b1.bound(i, j);
  mpq_class vol = q_power(s.q(), static_cast<long>(m) * m - b1.total()) / mpq_class(gl_order(s.q(), m));
  return vol * gl_scale / q_power(s.q(), lower_slots);
}

// Second factor of the integrand at h: root, tk, tlog; nullopt when zero.
struct Second {
  int root = 0, tk = 0, tlog = 0;
};
using SecondFn = std::function<std::optional<Second>(const HCell&)>;

enum class Kind { psi, psi_tilde };

// Exact element keeping the known coefficients of x below t^e.
FieldElem cut(const FieldElem& x, int e) {
  std::vector<fq_t> co;
  const int end = std::min({e, x.precision(), x.lowest_exponent() + static_cast<int>(x.coefficients().size())});
  for (int i = x.lowest_exponent(); i < end && !x.is_zero(); ++i) co.push_back(x.coeff(i));
  return FieldElem::from_coeffs(x.field(), x.lowest_exponent(), std::move(co));
}

struct Plan {
  Kind kind;
  int m, n;
  const MiddleStratum* st;
  LocalMatrix g0;
  SecondFn second;
  int depth;
  bool row_cosets = false;  // y cells from the last-row condition instead of fixed windows
};

// Psi~ over y for one GL(1) cell, by adaptive refinement: y is carried as a partially known series,
// a box is settled as soon as the Whittaker evaluator decides it, and otherwise one digit is split.
// The start box is the row lattice of beta^k A: the last row of alpha is a last row of beta^k J.
void gl1_y_adaptive(const Plan& plan, const HCell& cell, const Second& sec, const mpq_class& cellw, long vdet,
                    SymIntegral& acc, CostMetrics& cm) {
  const MiddleStratum& st = *plan.st;
  const Session& s = st.session();
  const int n = plan.n, last = n - 1, r = n - 2, q = s.q();
  if (cell.v % 2 != 0) return;
  const int k = -cell.v / 2;
  if (k < -MiddleStratum::kMaxPower || k > MiddleStratum::kMaxPower)
    throw ConfigError("valuation window exceeds the tabulated powers of beta");
  const LocalMatrix& B = st.beta_power(k);
  const Lattice A = radical_A2N(s.N, 0), b1 = radical_A2N(s.N, 1);
  LocalMatrix a0 = alpha_matrix(cell.h, std::vector<FieldElem>(static_cast<size_t>(r), FieldElem(s.f())), plan.g0);
  for (int j = 0; j < 2; ++j) {
    int lo = kExact;
    for (int l = 0; l < n; ++l)
      if (!B.at(last, l).is_zero()) lo = std::min(lo, *B.at(last, l).val() + A.bound(l, j));
    if (!a0.at(last, j).in_ideal(lo)) return;
  }
  struct Node {
    std::vector<FieldElem> y;
    std::vector<int> e;
  };
  Node root;
  std::vector<int> top(static_cast<size_t>(r));
  for (int j = 0; j < r; ++j) {
    int lo = kExact;
    for (int l = 0; l < n; ++l)
      if (!B.at(last, l).is_zero()) lo = std::min(lo, *B.at(last, l).val() + A.bound(l, 2 + j));
    const FieldElem& off = a0.at(last, 2 + j);
    if (!off.is_zero()) lo = std::min(lo, *off.val());
    const int start = lo - cell.v;
    top[static_cast<size_t>(j)] = b1.bound(0, 2 + j);
    root.y.emplace_back(s.f(), start);
    root.e.push_back(start);
  }
  std::vector<Node> stack{root};
  while (!stack.empty()) {
    Node nd = std::move(stack.back());
    stack.pop_back();
    ++cm.cells;
    bool settled_cell = true;
    for (int j = 0; j < r; ++j) settled_cell = settled_cell && nd.e[static_cast<size_t>(j)] >= top[static_cast<size_t>(j)];
    std::optional<WhittakerSym> wv;
    try {
      std::vector<FieldElem> y = nd.y;
      if (settled_cell)
        for (auto& x : y) x = cut(x, kExact);  // the integrand is invariant under the U^1 pattern
      wv = whittaker_middle(st, alpha_matrix(cell.h, y, plan.g0));
    } catch (const PrecisionError&) {
      if (settled_cell) throw;
      int j = 0;
      for (int i = 1; i < r; ++i)
        if (nd.e[static_cast<size_t>(i)] - top[static_cast<size_t>(i)] < nd.e[static_cast<size_t>(j)] - top[static_cast<size_t>(j)]) j = i;
      const int e = nd.e[static_cast<size_t>(j)];
      for (int d = 0; d < q; ++d) {
        Node ch = nd;
        FieldElem digit = d ? FieldElem::monomial(s.f(), static_cast<fq_t>(d), e) : FieldElem(s.f());
        ch.y[static_cast<size_t>(j)] = (cut(nd.y[static_cast<size_t>(j)], e) + digit).truncate(e + 1);
        ch.e[static_cast<size_t>(j)] = e + 1;
        stack.push_back(std::move(ch));
      }
      continue;
    }
    if (!wv) continue;
    ++cm.support_cells;
    long se = -vdet * (n - 3);
    for (int j = 0; j < r; ++j) se += 1 - 2L * std::min(nd.e[static_cast<size_t>(j)], top[static_cast<size_t>(j)]);
    SymKey key{static_cast<int>(vdet), mod(se, 2), wv->k, wv->unit_log, sec.tk, sec.tlog,
               mod(static_cast<long>(wv->psi_root) + sec.root, s.C->m())};
    acc.add(key, cellw * q_power(q, floor_div(se, 2)));
  }
}

SymIntegral run_plan(const Plan& plan, const IntegrationConfig& cfg, CostMetrics* cost) {
  const Session& s = plan.st->session();
  const int m = plan.m, n = plan.n, q = s.q();
  auto cells = h_cells(s, m, cfg, plan.depth);
  mpq_class cellw = h_cell_weight(s, m, plan.depth, cfg.gl_scale);
  // y cells: cosets of the U^1 pattern, windows x_ext steps wider.
  Lattice b1 = radical_A2N(s.N, 1);
  const int r = n - m - 1;
  std::vector<std::pair<int, int>> yslots;
  long ysqrt = 0;
  if (plan.kind == Kind::psi_tilde) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < r; ++j) {
        int b = b1.bound(i, m + 1 + j);
        ysqrt += 1 - 2L * b;
        for (int e = b - cfg.x_ext; e < b; ++e) yslots.emplace_back(i * r + j, e);
      }
  }
  auto ycells = plan.kind == Kind::psi_tilde && !plan.row_cosets ? digit_combinations(s, m * r, yslots)
                                             : std::vector<std::vector<FieldElem>>{};
  const int jobs = std::max(1, cfg.jobs);
  std::vector<SymIntegral> parts(static_cast<size_t>(jobs));
  std::vector<CostMetrics> costs(static_cast<size_t>(jobs));
  std::vector<std::exception_ptr> errors(static_cast<size_t>(jobs));
  auto worker = [&](int w) {
    try {
      SymIntegral& acc = parts[static_cast<size_t>(w)];
      CostMetrics& cm = costs[static_cast<size_t>(w)];
      LocalMatrix pad = LocalMatrix::identity(s.f(), n - m);
      for (size_t c = static_cast<size_t>(w); c < cells.size(); c += static_cast<size_t>(jobs)) {
        const HCell& cell = cells[c];
        auto sec = plan.second(cell);
        const long vdet = static_cast<long>(m) * cell.v;
        if (plan.kind == Kind::psi) {
          ++cm.cells;
          if (!sec) continue;
          auto wv = whittaker_middle(*plan.st, LocalMatrix::block_diag(cell.h, pad) * plan.g0);
          if (!wv) continue;
          ++cm.support_cells;
          long se = vdet * (n - m);
          SymKey k{static_cast<int>(vdet), mod(se, 2), wv->k, wv->unit_log, sec->tk, sec->tlog,
                   mod(static_cast<long>(wv->psi_root) + sec->root, s.C->m())};
          acc.add(k, cellw * q_power(q, floor_div(se, 2)));
        } else {
          if (!sec) continue;
          if (plan.row_cosets) {
            gl1_y_adaptive(plan, cell, *sec, cellw, vdet, acc, cm);
            continue;
          }
          cm.cells += static_cast<long>(ycells.size());
          long se = -vdet * (n - m - 2) + ysqrt;
          mpq_class w = cellw * q_power(q, floor_div(se, 2));
          for (const auto& y : ycells) {
            auto wv = whittaker_middle(*plan.st, alpha_matrix(cell.h, y, plan.g0));
            if (!wv) continue;
            ++cm.support_cells;
            SymKey k{static_cast<int>(vdet), mod(se, 2), wv->k, wv->unit_log, sec->tk, sec->tlog,
                     mod(static_cast<long>(wv->psi_root) + sec->root, s.C->m())};
            acc.add(k, w);
          }
        }
      }
    } catch (...) {
      errors[static_cast<size_t>(w)] = std::current_exception();
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  SymIntegral out;
  for (const auto& p : parts) out.merge(p);
  if (cost)
    for (const auto& c : costs) {
      cost->cells += c.cells;
      cost->support_cells += c.support_cells;
    }
  return out;
}

LocalMatrix translate_matrix(const Session& s, const FieldElem& y0) {
  LocalMatrix g = LocalMatrix::identity(s.f(), 2 * s.N);
  g.at(0, 1) = y0;
  return g;
}

SecondFn gl1_second(const Session& s, const Gl1Twist& tw) {
  if (tw.symbolic)
    return [](const HCell& c) { return std::optional<Second>(Second{0, c.v, c.mu_log}); };
  QuasiCharacter chi = *tw.chi;
  return [s, chi](const HCell& c) { return std::optional<Second>(Second{chi.value_exp(s, c.h.at(0, 0)), 0, 0}); };
}

// For a twist of level L the Psi~ support sits at val h = 2N L, the degree of the Jiang relation.
IntegrationConfig gl1_window(const Session& s, const Gl1Twist& tw, const IntegrationConfig& cfg) {
  IntegrationConfig c = cfg;
  if (!tw.symbolic && tw.chi) c.vmax += 2 * s.N * tw.chi->level();
  return c;
}

int gl1_depth(const Gl1Twist& tw, const IntegrationConfig& cfg) {
  int depth = cfg.unit_depth;
  if (!tw.symbolic && tw.chi && tw.chi->level() > 0) depth = std::max(depth, tw.chi->level() + 1);
  return depth;
}

SecondFn glN_second(const SimpleStratum& sst) {
  return [&sst](const HCell& c) -> std::optional<Second> {
    auto w = whittaker_simple(sst, c.h, -1);
    if (!w) return std::nullopt;
    return Second{w->psi_root, w->k, w->unit_log};
  };
}

Gl1Twist twist_for(const QuasiCharacter& chi) {
  if (chi.is_tame()) return Gl1Twist{true, std::nullopt};
  return Gl1Twist{false, chi};
}

SymEval eval_for(const MiddleParams& p, const QuasiCharacter& chi) { return sym_eval(p, chi); }

MiddleParams at_precision(const MiddleParams& p, int prec) {
  return p.stratum->session().precision == prec ? p : with_precision(p, prec);
}
SimpleParams at_precision(const SimpleParams& p, int prec) {
  return p.stratum->session().precision == prec ? p : with_precision(p, prec);
}

}  // namespace

// ---------------------------------------------------------------- config

IntegrationConfig IntegrationConfig::widened() const {
  IntegrationConfig c = *this;
  c.vmin -= 2;
  c.vmax += 2;
  c.unit_depth += 1;
  c.precision += 4;
  return c;
}

std::string IntegrationConfig::to_text() const {
  std::ostringstream os;
  os << "window=[" << vmin << "," << vmax << "],unit_depth=" << unit_depth << ",x_ext=" << x_ext
     << ",precision=" << precision << ",gl_scale=" << rational_text(gl_scale);
  return os.str();
}

// ---------------------------------------------------------------- symbolic integrals

void SymIntegral::add(const SymKey& k, const mpq_class& w) {
  auto it = t_.find(k);
  if (it == t_.end()) {
    t_.emplace(k, w);
  } else {
    it->second += w;
    if (it->second == 0) t_.erase(it);
  }
}

void SymIntegral::merge(const SymIntegral& o) {
  for (const auto& [k, w] : o.t_) add(k, w);
}

LaurentPoly SymIntegral::evaluate(const Session& s, const SymEval& e) const {
  const int m = s.C->m();
  RootSum even(s.C), odd(s.C);
  for (const auto& [k, w] : t_) {
    long r = k.root + static_cast<long>(k.zk) * e.zeta_m + static_cast<long>(k.tk) * e.twist_unif_m;
    if (k.ulog) r += e.unit_char.value_exp(s, k.ulog);
    if (k.tlog) r += e.twist_unit.value_exp(s, k.tlog);
    (k.sqrt_odd ? odd : even).add(k.xexp, mod(r, m), w);
  }
  return even.to_poly() + odd.to_poly() * Scalar::sqrt_q(s.C);
}

SymIntegral sym_psi_gl1(const MiddleStratum& st, const Gl1Twist& tw, const FieldElem& y0, const IntegrationConfig& cfg,
                        CostMetrics* cost) {
  const Session& s = st.session();
  Plan plan{Kind::psi, 1, 2 * s.N, &st, translate_matrix(s, y0), gl1_second(s, tw), gl1_depth(tw, cfg)};
  return run_plan(plan, gl1_window(s, tw, cfg), cost);
}

SymIntegral sym_psi_tilde_gl1(const MiddleStratum& st, const Gl1Twist& tw, const FieldElem& y0,
                              const IntegrationConfig& cfg, CostMetrics* cost) {
  const Session& s = st.session();
  Plan plan{Kind::psi_tilde, 1, 2 * s.N, &st, translate_matrix(s, y0), gl1_second(s, tw), gl1_depth(tw, cfg), true};
  return run_plan(plan, gl1_window(s, tw, cfg), cost);
}

SymIntegral sym_psi_glN(const MiddleStratum& st, const SimpleStratum& sst, const IntegrationConfig& cfg,
                        CostMetrics* cost) {
  const Session& s = st.session();
  Plan plan{Kind::psi, s.N, 2 * s.N, &st, g_u(s, sst.u()), glN_second(sst), cfg.unit_depth};
  return run_plan(plan, cfg, cost);
}

SymIntegral sym_psi_tilde_glN(const MiddleStratum& st, const SimpleStratum& sst, const IntegrationConfig& cfg,
                              CostMetrics* cost) {
  const Session& s = st.session();
  Plan plan{Kind::psi_tilde, s.N, 2 * s.N, &st, g_u(s, sst.u()), glN_second(sst), cfg.unit_depth};
  return run_plan(plan, cfg, cost);
}

SymEval sym_eval(const MiddleParams& p, const QuasiCharacter& lambda) {
  const Session& s = p.stratum->session();
  SymEval e;
  e.zeta_m = p.zeta.m_exp(s.C->m());
  e.unit_char = p.chi;
  if (lambda.is_tame()) {
    e.twist_unif_m = lambda.unif_root();
    e.twist_unit = FiniteMultChar{s.q() - 1, lambda.tame_exp()};
  }
  return e;
}

SymEval sym_eval(const MiddleParams& p, const SimpleParams& sp) {
  const Session& s = p.stratum->session();
  SymEval e;
  e.zeta_m = p.zeta.m_exp(s.C->m());
  e.unit_char = p.chi;
  e.twist_unif_m = sp.zeta_prime.m_exp(s.C->m());
  e.twist_unit = sp.phi;
  return e;
}

// ---------------------------------------------------------------- concrete integrals

RationalFnX psi_integral_gl1(SSide side, const MiddleParams& p0, const QuasiCharacter& chi,
                             const IntegrationConfig& cfg, const FieldElem* y0) {
  MiddleParams p = at_precision(p0, cfg.precision);
  const Session& s = p.stratum->session();
  FieldElem y = y0 ? *y0 : FieldElem(s.f());
  auto sym = sym_psi_gl1(*p.stratum, twist_for(chi), y, cfg);
  RationalFnX r(sym.evaluate(s, eval_for(p, chi)));
  if (side == SSide::one_minus_s) r = r.reflect(Scalar(s.C, mpq_class(1, s.q())));
  return r;
}

RationalFnX psi_tilde_gl1(const MiddleParams& p0, const QuasiCharacter& chi, const IntegrationConfig& cfg,
                          const FieldElem* y0) {
  MiddleParams p = at_precision(p0, cfg.precision);
  const Session& s = p.stratum->session();
  FieldElem y = y0 ? *y0 : FieldElem(s.f());
  auto sym = sym_psi_tilde_gl1(*p.stratum, twist_for(chi), y, cfg);
  return RationalFnX(sym.evaluate(s, eval_for(p, chi)));
}

RationalFnX psi_integral_glN(const MiddleParams& p0, const SimpleParams& sp0, const IntegrationConfig& cfg) {
  MiddleParams p = at_precision(p0, cfg.precision);
  SimpleParams sp = at_precision(sp0, cfg.precision);
  const Session& s = p.stratum->session();
  return RationalFnX(sym_psi_glN(*p.stratum, *sp.stratum, cfg).evaluate(s, sym_eval(p, sp)));
}

RationalFnX psi_tilde_glN(const MiddleParams& p0, const SimpleParams& sp0, const IntegrationConfig& cfg) {
  MiddleParams p = at_precision(p0, cfg.precision);
  SimpleParams sp = at_precision(sp0, cfg.precision);
  const Session& s = p.stratum->session();
  return RationalFnX(sym_psi_tilde_glN(*p.stratum, *sp.stratum, cfg).evaluate(s, sym_eval(p, sp)));
}

// ---------------------------------------------------------------- gamma factors

GammaResult assemble_gamma(const Session& s, const RationalFnX& psi, const RationalFnX& psi_tilde,
                           const Scalar& omega2_minus1, int n, int m) {
  (void)s;
  if (psi.is_zero()) throw ZeroDenominator("Psi vanishes for this Whittaker function");
  GammaResult g;
  g.psi = psi;
  g.psi_tilde = psi_tilde;
  Scalar sign = omega2_minus1.pow(n - 1);
  g.gamma = (psi_tilde / psi) * sign;
  if (!g.gamma.is_zero()) {
    g.monomial = as_monomial(g.gamma);
    if (g.monomial) {
      g.f_psi = g.monomial->degree;
      g.f_abs = g.monomial->degree + n * m;
    }
  }
  return g;
}

GammaResult gamma(const MiddleParams& p0, const QuasiCharacter& chi, const IntegrationConfig& cfg) {
  MiddleParams p = at_precision(p0, cfg.precision);
  const Session& s = p.stratum->session();
  FieldElem y(s.f());
  CostMetrics cost;
  Gl1Twist tw = twist_for(chi);
  SymEval e = eval_for(p, chi);
  RationalFnX psi(sym_psi_gl1(*p.stratum, tw, y, cfg, &cost).evaluate(s, e));
  if (psi.is_zero()) throw ZeroDenominator("Psi vanishes: use gamma_via_translates");
  RationalFnX pt(sym_psi_tilde_gl1(*p.stratum, tw, y, cfg, &cost).evaluate(s, e));
  Scalar om = chi.value(s, -FieldElem::constant(s.f(), 1));
  GammaResult g = assemble_gamma(s, psi, pt, om, 2 * s.N, 1);
  g.translate = "identity";
  g.cost = cost;
  return g;
}

GammaResult gamma(const MiddleParams& p0, const SimpleParams& sp0, const IntegrationConfig& cfg) {
  MiddleParams p = at_precision(p0, cfg.precision);
  SimpleParams sp = at_precision(sp0, cfg.precision);
  const Session& s = p.stratum->session();
  CostMetrics cost;
  SymEval e = sym_eval(p, sp);
  RationalFnX psi(sym_psi_glN(*p.stratum, *sp.stratum, cfg, &cost).evaluate(s, e));
  if (psi.is_zero()) throw ZeroDenominator("Psi vanishes for the g_u translate");
  RationalFnX pt(sym_psi_tilde_glN(*p.stratum, *sp.stratum, cfg, &cost).evaluate(s, e));
  Scalar om = central_character(sp).value(s, -FieldElem::constant(s.f(), 1));
  GammaResult g = assemble_gamma(s, psi, pt, om, 2 * s.N, s.N);
  g.translate = "g_u";
  g.cost = cost;
  return g;
}

std::vector<FieldElem> default_translates(const Session& s, const QuasiCharacter& chi) {
  std::vector<FieldElem> out;
  const FieldElem one = FieldElem::constant(s.f(), 1);
  if (chi.c_def()) {
    out.push_back(-*chi.c_def());
    out.push_back(-*chi.c_def() + one);
  } else {
    out.push_back(FieldElem(s.f()));
    out.push_back(one);
  }
  const int top = std::max(1, chi.level() + 1);
  for (int e = 1; e <= top; ++e)
    for (int mu = 1; mu < s.q(); ++mu) {
      FieldElem y = FieldElem::monomial(s.f(), static_cast<fq_t>(mu), -e);
      if (std::none_of(out.begin(), out.end(), [&](const FieldElem& x) { return x.identical(y); })) out.push_back(y);
    }
  return out;
}

GammaResult gamma_via_translates(const MiddleParams& p0, const QuasiCharacter& chi, const std::vector<FieldElem>& y0s,
                                 const IntegrationConfig& cfg) {
  if (y0s.empty()) throw ConfigError("translate list is empty");
  MiddleParams p = at_precision(p0, cfg.precision);
  const Session& s = p.stratum->session();
  Gl1Twist tw = twist_for(chi);
  SymEval e = eval_for(p, chi);
  Scalar om = chi.value(s, -FieldElem::constant(s.f(), 1));
  std::optional<GammaResult> first;
  for (const auto& y0 : y0s) {
    CostMetrics cost;
    RationalFnX psi(sym_psi_gl1(*p.stratum, tw, y0, cfg, &cost).evaluate(s, e));
    if (psi.is_zero()) continue;
    RationalFnX pt(sym_psi_tilde_gl1(*p.stratum, tw, y0, cfg, &cost).evaluate(s, e));
    GammaResult g = assemble_gamma(s, psi, pt, om, 2 * s.N, 1);
    g.translate = "I+(" + y0.to_text() + ")E12";
    g.cost = cost;
    if (!first) {
      first = g;
      continue;
    }
    if (!(g.gamma == first->gamma))
      throw DomainError("translates " + first->translate + " and " + g.translate + " give different gamma factors");
    first->translate += ";checked " + g.translate;
    return *first;
  }
  if (!first) throw AllTranslatesVanish("Psi vanishes for every translate in the list");
  return *first;
}

SymPair sym_pair_gl1(const MiddleStratum& st, const Gl1Twist& tw, const FieldElem& y0, const IntegrationConfig& cfg) {
  SymPair p;
  p.psi = sym_psi_gl1(st, tw, y0, cfg, &p.cost);
  p.psi_tilde = sym_psi_tilde_gl1(st, tw, y0, cfg, &p.cost);
  p.translate = y0.is_zero() ? "identity" : "I+(" + y0.to_text() + ")E12";
  return p;
}

SymPair sym_pair_glN(const MiddleStratum& st, const SimpleStratum& sst, const IntegrationConfig& cfg) {
  SymPair p;
  p.psi = sym_psi_glN(st, sst, cfg, &p.cost);
  p.psi_tilde = sym_psi_tilde_glN(st, sst, cfg, &p.cost);
  p.translate = "g_u";
  return p;
}

GammaResult gamma_from_sym(const Session& s, const SymPair& pair, const SymEval& e, const Scalar& omega2_minus1, int m) {
  RationalFnX psi(pair.psi.evaluate(s, e));
  if (psi.is_zero()) throw ZeroDenominator("Psi vanishes for " + pair.translate);
  GammaResult g = assemble_gamma(s, psi, RationalFnX(pair.psi_tilde.evaluate(s, e)), omega2_minus1, 2 * s.N, m);
  g.translate = pair.translate;
  g.cost = pair.cost;
  return g;
}

// ---------------------------------------------------------------- stabilization

namespace {

template <class F>
StabilizationReport stabilize(const IntegrationConfig& cfg, F compute) {
  StabilizationReport rep;
  GammaResult base = compute(cfg);
  rep.base_value = base.gamma.to_text();
  rep.base_cost = base.cost;
  rep.stable = true;
  std::vector<std::pair<std::string, IntegrationConfig>> variants;
  IntegrationConfig c = cfg;
  c.vmin -= 2;
  c.vmax += 2;
  variants.emplace_back("valuation_window", c);
  c = cfg;
  c.unit_depth += 1;
  variants.emplace_back("unit_depth", c);
  c = cfg;
  c.x_ext += 1;
  variants.emplace_back("x_windows", c);
  c = cfg;
  c.precision += 4;
  variants.emplace_back("precision", c);
  for (const auto& [name, vc] : variants) {
    GammaResult g = compute(vc);
    rep.widened_value = g.gamma.to_text();
    rep.widened_cost = g.cost;
    if (!(g.gamma == base.gamma)) {
      rep.stable = false;
      rep.first_divergent = name;
      return rep;
    }
  }
  return rep;
}

}  // namespace

StabilizationReport verify_stabilized_gl1(const MiddleParams& p, const QuasiCharacter& chi, const IntegrationConfig& cfg) {
  const Session& s = p.stratum->session();
  return stabilize(cfg, [&](const IntegrationConfig& c) {
    try {
      return gamma(p, chi, c);
    } catch (const ZeroDenominator&) {
      return gamma_via_translates(p, chi, default_translates(s, chi), c);
    }
  });
}

StabilizationReport verify_stabilized_glN(const MiddleParams& p, const SimpleParams& sp, const IntegrationConfig& cfg) {
  return stabilize(cfg, [&](const IntegrationConfig& c) { return gamma(p, sp, c); });
}

MiddleParams with_precision(const MiddleParams& p, int precision) {
  Session s = p.stratum->session().with_precision(precision);
  MiddleParams r = p;
  r.stratum = std::make_shared<const MiddleStratum>(s, p.stratum->lift());
  return r;
}

SimpleParams with_precision(const SimpleParams& p, int precision) {
  Session s = p.stratum->session().with_precision(precision);
  SimpleParams r = p;
  r.stratum = std::make_shared<const SimpleStratum>(s, p.stratum->u());
  return r;
}

}  // namespace gammalab
