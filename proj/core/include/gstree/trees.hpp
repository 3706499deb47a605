#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gstree/sequence.hpp"

namespace gstree {

// Per-generation child counts q_1, q_2, ...: generation n-1 vertices have
// q_n children each.  Either a constant or an explicit list (the list is
// extended by its last entry beyond its length).
class DegreeProfile {
 public:
  static DegreeProfile constant(long q);
  static DegreeProfile from_list(std::vector<long> q);

  long degree(std::int64_t generation) const;  // q_n, generation >= 1
  bool is_constant() const { return list_.empty(); }
  long constant_degree() const { return constant_; }
  const std::vector<long>& list() const { return list_; }
  long min_degree(std::int64_t depth) const;
  long max_degree(std::int64_t depth) const;

  // Total vertex count of generations 1..depth (excludes the root).
  double vertices_to_depth(std::int64_t depth) const;

  std::string describe() const;

 private:
  long constant_ = 0;
  std::vector<long> list_;
};

struct DyadicBounds {
  std::vector<long> lower;  // floor(log2 q_i)
  std::vector<long> upper;  // ceil(log2 q_i)
};

// floor/ceil dyadic exponents for q_1..q_depth; requires q_i >= 2.
DyadicBounds dyadic_bounds(const DegreeProfile& profile, std::int64_t depth);

// (2^{l_1}, 2^{l_2}, ...); requires l_i >= 1.
DegreeProfile pow2_profile(std::span<const long> exponents);

// Partial sums of Q(q; alpha) = sum_k log(q_{k+1}) / sqrt(log(q_1...q_{k+1})) Q_k(alpha).
SumResult q_weighted_functional(const DegreeProfile& profile,
                                const SequenceModel& model, std::int64_t horizon,
                                double tol = 1e-6,
                                double divergence_threshold = kDefaultDivergenceThreshold);

struct GeneralCriterionResult {
  double value = 0.0;
  Status status = Status::undetermined;
  bool assumption_ok = false;    // sup_n log Dmax^(n) / log Dmin^(n) below cap
  double max_log_ratio = 0.0;
};

GeneralCriterionResult general_tree_criterion(std::span<const long> dmax_profile,
                                              std::span<const long> dmin_profile,
                                              const SequenceModel& model,
                                              std::int64_t horizon,
                                              double ratio_cap = 64.0);

inline constexpr std::int64_t kDefaultVertexBudget = std::int64_t{1} << 26;

// Explicit rooted tree as generation-indexed parent arrays:
// parent(n, i) is the index (within generation n-1) of the parent of the
// i-th vertex of generation n.
class TreeSpec {
 public:
  TreeSpec() = default;
  explicit TreeSpec(std::vector<std::vector<long>> parents);

  std::int64_t depth() const { return static_cast<std::int64_t>(parents_.size()); }
  std::int64_t width(std::int64_t generation) const;  // vertex count at generation
  long parent(std::int64_t generation, std::int64_t index) const;

  // Child count of vertex (generation, index); defined for generation < depth.
  long child_count(std::int64_t generation, std::int64_t index) const;
  long dmin(std::int64_t generation) const;  // D_min^{(generation)}, 0 <= generation < depth
  long dmax(std::int64_t generation) const;

  std::string serialize() const;  // one line per generation: parent indices
  static TreeSpec parse(std::istream& in);

 private:
  void index_children();
  std::vector<std::vector<long>> parents_;
  std::vector<std::vector<long>> child_counts_;  // per generation (root = gen 0)
};

TreeSpec build_tq(const DegreeProfile& profile, std::int64_t depth,
                  std::int64_t vertex_budget = kDefaultVertexBudget);

// A rooted path (root, v_1, ..., v_n); vertices[d] is the index of the
// depth-(d+1) vertex within its generation.
struct RayPrefix {
  const TreeSpec* tree = nullptr;
  std::vector<long> vertices;
};

// 2^(-|common prefix depth|); 0 when the prefixes agree entirely.
double boundary_distance(const RayPrefix& a, const RayPrefix& b);

// Deterministic order-preserving embedding of T(sub) into T(super)
// (child j of v maps to child j of the image of v).
struct EmbeddingPlan {
  // map[n][i] = index within generation n of the image of sub-vertex i.
  std::vector<std::vector<std::int64_t>> map;
};

EmbeddingPlan embed_profiles(const DegreeProfile& sub, const DegreeProfile& super,
                             std::int64_t depth);

}  // namespace gstree
