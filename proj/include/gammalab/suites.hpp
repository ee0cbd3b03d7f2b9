#pragma once

#include <string>
#include <vector>

#include "gammalab/converse.hpp"

namespace gammalab {

struct SuiteCheck {
  std::string anchor;  // the statement being checked
  bool ok = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  int q = 0, N = 0;
  std::vector<SuiteCheck> checks;

  void add(std::string anchor, bool ok, std::string detail);
  bool ok() const;
  // Null when every check passed.
  const SuiteCheck* first_failure() const;
  std::string to_json() const;
};

// Psi for tame twists, the tame gamma closed form, Psi for simple twists and the simple-twist factorization.
SuiteReport suite_props(const ConverseEngine& eng);
// Closed-form support predicates against the membership oracle on random alpha-shaped matrices.
SuiteReport suite_lemmas(const Session& s, int samples, unsigned seed, int oracle_depth = 2);
// gamma(pi x chi) = omega_pi(c_def)^{-1} tate_gamma(chi)^{2N} for every chi in Xi_middle.
SuiteReport suite_jiang(const ConverseEngine& eng);
SuiteReport suite_conductor(const ConverseEngine& eng);
SuiteReport suite_theorem_main(const ConverseEngine& eng, TheoremReport* out = nullptr);
// Widened-window reruns on a representative tame, wild and simple twist, plus a too-narrow
// window that must be reported unstable.
SuiteReport suite_stabilization(const ConverseEngine& eng);

}  // namespace gammalab
