#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gstree/montecarlo.hpp"
#include "gstree/sequence.hpp"
#include "gstree/trees.hpp"

namespace gstree {

enum class Decision { bounded, unbounded, undetermined };
const char* to_string(Decision d);

// Which decision rule produced the verdict, named by what it evaluates.
enum class CriterionKind {
  uniform_q,        // sum_l Q_l/sqrt(l+1) on a uniform-degree tree
  weighted_q,       // degree-weighted sum Q(q; alpha)
  general_profile,  // min/max degree profile bound for arbitrary trees
  monotone_sum,     // sum alpha_k for positive non-increasing alpha
  two_weight        // Q of the product weight phi = alpha * sigma
};
const char* to_string(CriterionKind k);

struct VerdictReport {
  Decision decision = Decision::undetermined;
  CriterionKind criterion = CriterionKind::uniform_q;
  SumResult evidence;          // partial sums and status of the series used
  std::int64_t horizon = 0;
  bool assumption_ok = true;   // preconditions of the cited criterion
  std::string notes;
};

// Picks the most specific applicable criterion for the profile and model.
// Assumption failures yield undetermined with the failed assumption named,
// never a silently misapplied rule.
VerdictReport boundedness_verdict(const DegreeProfile& profile,
                                  const SequenceModel& model,
                                  std::int64_t horizon = kDefaultHorizon);

// Verdict for an explicit finite tree via its min/max degree profiles;
// requires nonnegative alpha and a bounded max/min log-degree ratio.
VerdictReport boundedness_verdict(const TreeSpec& tree, const SequenceModel& model,
                                  std::int64_t horizon = kDefaultHorizon);

// Positive non-increasing alpha: decided by sum alpha_k alone.
// Throws std::invalid_argument when alpha is not of that shape.
Decision monotone_verdict(const SequenceModel& model,
                          std::int64_t horizon = kDefaultHorizon);

// phi(k) = alpha_fn(k) * sigma_fn(k); bounded when Q(phi) converges with a
// certified tail (geometric-ratio certificate or finite support), else
// undetermined.  The rule is one-sided: never returns unbounded.
Decision two_weight_verdict(const WeightFn& alpha_fn, const WeightFn& sigma_fn,
                            std::int64_t horizon = kDefaultHorizon);

struct SandwichRow {
  std::int64_t depth = 0;
  double q_ref = 0.0;       // sqrt(log q) * Q(alpha^(n)) or Q(q; alpha^(n))
  double moment_est = 0.0;  // sqrt of the second-moment estimate of M_n
  double ratio = 0.0;
  double ratio_lo = 0.0;    // CI from the second-moment half-width
  double ratio_hi = 0.0;
  bool skipped = false;     // q_ref == 0 row
};

struct SandwichTable {
  std::vector<SandwichRow> rows;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  std::int64_t replicas = 0;
  std::uint64_t seed = 0;
};

// One traversal per replica at max(depths); every requested depth reads its
// level maxima from that traversal.
SandwichTable sandwich_experiment(const DegreeProfile& profile,
                                  const SequenceModel& model,
                                  std::span<const std::int64_t> depths,
                                  std::int64_t replicas, std::uint64_t seed,
                                  int workers = 1,
                                  std::int64_t vertex_budget = kDefaultVertexBudget);

}  // namespace gstree
