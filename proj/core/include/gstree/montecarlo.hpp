#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "gstree/sequence.hpp"
#include "gstree/trees.hpp"

namespace gstree {

enum class Statistic { level_max_abs, level_max_signed, running_max };

// Depth-indexed weight, defined for k >= 1.
using WeightFn = std::function<double(std::int64_t)>;

struct RunConfig {
  DegreeProfile profile;
  SequenceModel model;
  int depth = 1;
  std::int64_t replicas = 1;
  std::uint64_t seed = 0;
  double confidence = 0.99;
  int workers = 1;
  std::int64_t vertex_budget = kDefaultVertexBudget;
};

// Per-depth sample moments of the chosen statistic across replicas.
// Row i describes depth[i]; half_width is the normal-approximation
// confidence half-width for the mean at the configured level.
struct RunStats {
  std::vector<std::int64_t> depth;
  std::vector<double> mean;
  std::vector<double> second_moment;
  std::vector<double> half_width;
  // Half-width for the second-moment column (kept out of the CSV schema).
  std::vector<double> second_half_width;
  std::int64_t replicas = 0;
  double confidence = 0.99;
  double wall_seconds = 0.0;
};

// Two-sided standard normal quantile for the given confidence level.
double normal_quantile_two_sided(double confidence);

// One replica: per-level maxima (M_1, ..., M_n) over the tree boundary,
// absolute or signed depending on `stat` (running_max reports
// sup_{j <= k} M_j).  Replica `replica_id` always sees the same draws.
std::vector<double> sample_level_maxima(const RunConfig& config,
                                        std::int64_t replica_id,
                                        Statistic stat = Statistic::level_max_abs);

// Aggregates `config.replicas` independent replicas of the per-level
// statistic.  Identical (seed, config) give identical RunStats for any
// worker count.
RunStats estimate_moments(const RunConfig& config,
                          Statistic stat = Statistic::level_max_abs);

// sup over windows [n, n+m] with first_level <= n <= n+m <= depth and over
// rays of |sum_{k=n}^{n+m} alpha_k Z(pi_k)|.  One scalar per replica;
// stats reported as a single row at config.depth.
RunStats tail_sup_statistic(const RunConfig& config, std::int64_t first_level);
double tail_sup_one(const RunConfig& config, std::int64_t replica_id,
                    std::int64_t first_level);

// One traversal of T(super) per replica with T(sub) embedded by
// embed_profiles; both maxima at config.depth come from the same draws, so
// M_sub <= M_super pathwise.  Requires sub.degree(n) <= super.degree(n).
std::vector<std::pair<double, double>> coupled_domination(
    const DegreeProfile& sub, const DegreeProfile& super,
    const SequenceModel& model, int depth, std::uint64_t seed,
    std::int64_t replicas,
    std::int64_t vertex_budget = kDefaultVertexBudget);

struct BrwStats {
  RunStats signed_max;    // max displacement, signed
  RunStats absolute_max;  // same traversal, |.| maxima
};

// Branching random walk displacement view of the same sampler; on the
// binary tree the absolute statistic coincides with the boundary maxima.
BrwStats brw_displacement(const RunConfig& config);

// Per-level maxima of |sigma(|v|) * sum_{u on path} alpha(|u|) Z(u)| with
// depth-indexed weights.  Weights must be finite for 1 <= k <= depth.
std::vector<double> two_weight_sample(const RunConfig& config,
                                      std::int64_t replica_id,
                                      const WeightFn& alpha_fn,
                                      const WeightFn& sigma_fn);

RunStats two_weight_moments(const RunConfig& config, const WeightFn& alpha_fn,
                            const WeightFn& sigma_fn);

}  // namespace gstree
