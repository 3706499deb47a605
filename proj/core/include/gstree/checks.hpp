#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gstree/sequence.hpp"

namespace gstree {

struct CheckResult {
  std::string name;   // "<check>/<family>"
  bool pass = false;
  double error = 0.0;
  std::string detail;
};

struct CheckOptions {
  double tol = 1e-12;  // relative, scaled by 1 + magnitude
  // Test hook: added to the Walsh side of the Parseval identity so the
  // harness can prove the check actually fires.
  double parseval_perturbation = 0.0;
};

// Finite-support instances of every built-in family, used by the identity
// battery and the verification command.
std::vector<std::pair<std::string, SequenceModel>> builtin_finite_families();

// Exact-identity battery over the built-in families: Parseval, Walsh
// covariance vs the kernel, the block re-indexing identity, the constant
// degree homogeneity of the weighted criterion, the inequality chain, and
// the sqrt(N) tail-norm bound.
std::vector<CheckResult> run_identity_checks(const CheckOptions& options = {});

}  // namespace gstree
