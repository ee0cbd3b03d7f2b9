#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <random>
#include <vector>

#include "gammalab/suites.hpp"

namespace oracle {

using namespace gammalab;

inline FieldElem random_elem(std::mt19937& rng, const Session& s, int lo, int len, bool unit = false) {
  std::vector<fq_t> co(static_cast<size_t>(len));
  for (auto& c : co) c = static_cast<fq_t>(rng() % static_cast<unsigned>(s.q()));
  if (unit) co[0] = static_cast<fq_t>(1 + rng() % static_cast<unsigned>(s.q() - 1));
  return FieldElem::from_coeffs(s.f(), lo, co);
}

// 1 + x with x random in the lattice L, entries known to a few digits.
inline LocalMatrix random_unit_lattice(std::mt19937& rng, const Session& s, const Lattice& L) {
  LocalMatrix x = LocalMatrix::identity(s.f(), L.n);
  for (int i = 0; i < L.n; ++i)
    for (int j = 0; j < L.n; ++j) x.at(i, j) = x.at(i, j) + random_elem(rng, s, L.bound(i, j), 3);
  return x;
}

// A random element y j0 beta^k of J~ for the middle stratum.
inline LocalMatrix random_jtilde(std::mt19937& rng, const MiddleStratum& st, int kspan = 2) {
  const Session& s = st.session();
  const int q = s.q();
  const auto& rep = st.unit_reps()[1 + rng() % static_cast<unsigned>(q * q - 1)];
  const int k = static_cast<int>(rng() % static_cast<unsigned>(2 * kspan + 1)) - kspan;
  return random_unit_lattice(rng, s, st.u1()) * rep.j * st.beta_power(k);
}

// Upper unipotent u with entries of valuation >= lo.
inline LocalMatrix random_upper(std::mt19937& rng, const Session& s, int n, int lo) {
  LocalMatrix u = LocalMatrix::identity(s.f(), n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) u.at(i, j) = random_elem(rng, s, lo, 4);
  return u;
}

// psi_n(u) = psi_F(sum u_{i,i+1}).
inline Scalar psi_n(const Session& s, const LocalMatrix& u) {
  FieldElem acc(s.f());
  for (int i = 0; i + 1 < u.n(); ++i) acc = acc + u.at(i, i + 1);
  return psi_F(s, acc);
}

// Representatives 1 + x of (1 + L1) / (1 + L2), x running over digit vectors of L1 / L2.
inline std::vector<LocalMatrix> unit_coset_reps(const Session& s, const Lattice& L1, const Lattice& L2) {
  struct Slot {
    int i, j, e;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < L1.n; ++i)
    for (int j = 0; j < L1.n; ++j)
      for (int e = L1.bound(i, j); e < L2.bound(i, j); ++e) slots.push_back({i, j, e});
  std::vector<LocalMatrix> out;
  std::vector<int> digit(slots.size(), 0);
  while (true) {
    LocalMatrix x = LocalMatrix::identity(s.f(), L1.n);
    for (size_t k = 0; k < slots.size(); ++k)
      if (digit[k]) x.at(slots[k].i, slots[k].j) = x.at(slots[k].i, slots[k].j) +
                                                   FieldElem::monomial(s.f(), static_cast<fq_t>(digit[k]), slots[k].e);
    out.push_back(x);
    size_t k = 0;
    while (k < digit.size() && ++digit[k] == s.q()) digit[k++] = 0;
    if (k == digit.size()) break;
  }
  return out;
}

// J(g) = [U^1 : U^2]^{-1} sum_{h in U^1/U^2} psi_beta(h)^{-1} Lambda(g h).
inline Scalar bessel_average(const MiddleParams& p, const std::vector<LocalMatrix>& reps, const LocalMatrix& g) {
  const Session& s = p.stratum->session();
  Scalar acc(s.C, mpq_class(0));
  for (const auto& h : reps) acc = acc + psi_beta(s, h, p.stratum->beta()).inverse() * lambda_middle(p, g * h);
  return acc * Scalar(s.C, mpq_class(1, static_cast<long>(reps.size())));
}

// For ramified chi with chi(varpi) = 1 or level 0, psi_F of conductor P and the self-dual measure:
// gamma(s, chi, psi) = X^{a-1} q^{-1/2} sum_{u in (O/P^a)^x} chi^{-1}(varpi^{1-a} u) psi(varpi^{1-a} u), a the conductor.
inline RationalFnX gauss_sum_gamma(const Session& s, const QuasiCharacter& chi) {
  const int a = chi.conductor_exponent();
  const int q = s.q();
  Scalar acc(s.C, mpq_class(0));
  const QuasiCharacter inv = chi.inverse();
  long count = 1;
  for (int i = 0; i < a; ++i) count *= q;
  for (long idx = 0; idx < count; ++idx) {
    std::vector<fq_t> co(static_cast<size_t>(a));
    long r = idx;
    for (auto& c : co) c = static_cast<fq_t>(r % q), r /= q;
    if (co[0] == 0) continue;
    const FieldElem x = FieldElem::from_coeffs(s.f(), 1 - a, co);
    acc = acc + inv.value(s, x) * psi_F(s, x);
  }
  return RationalFnX::monomial(acc * Scalar::sqrt_q(s.C).inverse(), a - 1);
}

// First irreducible (c, d) with c != 0.
inline std::pair<fq_t, fq_t> first_irreducible(const Session& s) {
  for (int c = 1; c < s.q(); ++c)
    for (int d = 0; d < s.q(); ++d)
      if (Fq2Context::irreducible(*s.f(), static_cast<fq_t>(c), static_cast<fq_t>(d)))
        return {static_cast<fq_t>(c), static_cast<fq_t>(d)};
  return {0, 0};
}

}  // namespace oracle
