#include "gammalab/session.hpp"

#include <numeric>

namespace gammalab {

Session Session::make(int q, int N, int precision, int m_zeta, int m_lambda) {
  if (N < 1) throw ConfigError("N must be positive");
  Session s;
  s.F = std::make_shared<const FqContext>(q);
  s.N = N;
  s.precision = precision;
  s.m_zeta = m_zeta;
  s.m_lambda = m_lambda;
  int mz = std::lcm(m_zeta, m_lambda);
  s.C = make_context(q, s.F->p(), session_cyclotomic_order(q, s.F->p(), mz, s.max_wild_level));
  return s;
}

}  // namespace gammalab
