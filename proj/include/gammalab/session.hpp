#pragma once

#include <memory>

#include "gammalab/localfield.hpp"
#include "gammalab/scalars.hpp"

namespace gammalab {

// Read-only context shared by every computation of one run.
struct Session {
  std::shared_ptr<const FqContext> F;
  Ctx C;
  int N = 2;
  int precision = 8;      // relative precision of series inversions
  int m_zeta = 8;         // order bound for zeta, zeta'
  int m_lambda = 4;       // order bound for lambda(varpi)
  int max_wild_level = 4; // largest supported wild character level

  const FqContext* f() const { return F.get(); }
  int q() const { return F->q(); }
  int p() const { return F->p(); }

  static Session make(int q, int N, int precision = 8, int m_zeta = 8, int m_lambda = 4);
  Session with_precision(int prec) const {
    Session s = *this;
    s.precision = prec;
    return s;
  }
};

}  // namespace gammalab
