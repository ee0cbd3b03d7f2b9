#pragma once

#include <optional>
#include <vector>

#include "gammalab/types_supercuspidal.hpp"

namespace gammalab {

// G = n * y with n upper unipotent and y lower triangular in 1 + L.
struct NUReduction {
  LocalMatrix n, y;
  int psi_n_exp = 0;  // exponent of psi_F(sign * sum n_{i,i+1})
};

// The lower triangular y is unique when it exists; nullopt when G is not in N (1 + L).
// L must satisfy L L within L (a radical power).
std::optional<NUReduction> reduce_NU(const Session& s, const LocalMatrix& G, const Lattice& L, int sign = 1);

// W(g) = z_m^{psi_root} * zeta^k * (unit character)(g0^{unit_log}); absent means W(g) = 0.
struct WhittakerSym {
  int psi_root = 0;
  int k = 0;
  int unit_log = 0;
};

// W_{(f, chi, zeta)} with the psi model.
std::optional<WhittakerSym> whittaker_middle(const MiddleStratum& st, const LocalMatrix& g);
// W_{(u, phi, zeta')}; sign = -1 gives the psi^{-1} model.
std::optional<WhittakerSym> whittaker_simple(const SimpleStratum& st, const LocalMatrix& g, int sign = 1);

Scalar whittaker_value(const MiddleParams& p, const LocalMatrix& g);
Scalar whittaker_value(const SimpleParams& p, const LocalMatrix& g, int sign = 1);

// g -> w_n transpose(g)^{-1}, so that W~(g) = W(tilde_argument(g)).
LocalMatrix tilde_argument(const LocalMatrix& g, int rel_prec);

// [[0,1,0],[0,0,I_{n-m-1}],[h,0,h y]] * g0 in block sizes (1, n-m-1, m) by (m, 1, n-m-1);
// y is m x (n-m-1), row-major.
LocalMatrix alpha_matrix(const LocalMatrix& h, const std::vector<FieldElem>& y, const LocalMatrix& g0);

// The GL(1) shape: last row (h^{-1}, 0, -x_{2N-2} h^{-1}, ..., -x_1 h^{-1}), x = (x_1, ..., x_{2N-2}).
LocalMatrix alpha_gl1(const Session& s, const FieldElem& h, const std::vector<FieldElem>& x);

struct Gl1Support {
  LocalMatrix u;  // I + d varpi^{-1} E_{N,2N}
  int k = -1;
  LocalMatrix z;  // identity except its first row
};
// Closed-form support test for alpha_gl1: h^{-1} in c^{-1} varpi^2 (1+P) and
// x_i in O for N <= i <= 2N-2, x_i in P^{-1} otherwise. On success alpha = u beta^{-1} z.
std::optional<Gl1Support> support_alpha_gl1(const MiddleStratum& st, const FieldElem& h,
                                            const std::vector<FieldElem>& x);

struct GlNSupport {
  LocalMatrix n;
  int k = 0;
  LocalMatrix j;  // alpha = n beta^k j with j in J
  fq_t a = 0;     // residue of u / (c u^2 + d u - 1)
};
// Closed-form support test for alpha = [[0,1,0],[0,0,I],[h,0,h y]] g_u:
// h in N a u varpi^2 U^1(J_N), y_{N-1,0} in (u varpi)^{-1} + pattern and the other entries of y in
// the U^1 pattern of rows 0..N-1, columns N+1..2N-1.
std::optional<GlNSupport> support_alpha_glN(const MiddleStratum& st, const FieldElem& u, const LocalMatrix& h,
                                           const std::vector<FieldElem>& y);

struct MembershipWitness {
  int k = 0;
  int unit_log = 0;
  bool operator==(const MembershipWitness& o) const { return k == o.k && unit_log == o.unit_log; }
};
// Brute force over k in [kmin, kmax] and representatives j of J/U^m:
// records (k, residue of j) whenever g j^{-1} beta^{-k} lies in N U^m.
std::vector<MembershipWitness> membership_oracle(const MiddleStratum& st, const LocalMatrix& g, int kmin, int kmax,
                                                 int m);

}  // namespace gammalab
