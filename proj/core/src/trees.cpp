#include "gstree/trees.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

#include "gstree/errors.hpp"

namespace gstree {

DegreeProfile DegreeProfile::constant(long q) {
  if (q < 1) throw std::invalid_argument("degree profile entries must be >= 1");
  DegreeProfile p;
  p.constant_ = q;
  return p;
}

DegreeProfile DegreeProfile::from_list(std::vector<long> q) {
  if (q.empty()) throw std::invalid_argument("degree profile list must be non-empty");
  for (long v : q)
    if (v < 1) throw std::invalid_argument("degree profile entries must be >= 1");
  DegreeProfile p;
  p.list_ = std::move(q);
  p.constant_ = p.list_.back();
  return p;
}

long DegreeProfile::degree(std::int64_t generation) const {
  if (generation < 1) throw std::invalid_argument("generation must be >= 1");
  if (list_.empty()) return constant_;
  const std::size_t i = static_cast<std::size_t>(generation - 1);
  return i < list_.size() ? list_[i] : constant_;
}

long DegreeProfile::min_degree(std::int64_t depth) const {
  long m = std::numeric_limits<long>::max();
  for (std::int64_t n = 1; n <= depth; ++n) m = std::min(m, degree(n));
  return m;
}

long DegreeProfile::max_degree(std::int64_t depth) const {
  long m = 0;
  for (std::int64_t n = 1; n <= depth; ++n) m = std::max(m, degree(n));
  return m;
}

double DegreeProfile::vertices_to_depth(std::int64_t depth) const {
  double total = 0.0, level = 1.0;
  for (std::int64_t n = 1; n <= depth; ++n) {
    level *= static_cast<double>(degree(n));
    total += level;
  }
  return total;
}

std::string DegreeProfile::describe() const {
  std::ostringstream os;
  if (is_constant()) {
    os << "constant:" << constant_;
  } else {
    os << "profile:";
    for (std::size_t i = 0; i < list_.size(); ++i)
      os << (i ? "," : "") << list_[i];
  }
  return os.str();
}

DyadicBounds dyadic_bounds(const DegreeProfile& profile, std::int64_t depth) {
  DyadicBounds b;
  b.lower.reserve(depth);
  b.upper.reserve(depth);
  for (std::int64_t n = 1; n <= depth; ++n) {
    const long q = profile.degree(n);
    if (q < 2) throw std::invalid_argument("dyadic_bounds requires q_i >= 2");
    const unsigned long uq = static_cast<unsigned long>(q);
    b.lower.push_back(std::bit_width(uq) - 1);
    b.upper.push_back(std::bit_width(uq - 1));
  }
  return b;
}

DegreeProfile pow2_profile(std::span<const long> exponents) {
  std::vector<long> q;
  q.reserve(exponents.size());
  for (long e : exponents) {
    if (e < 1) throw std::invalid_argument("pow2_profile requires exponents >= 1");
    if (e >= 62) throw std::invalid_argument("pow2_profile exponent too large");
    q.push_back(1L << e);
  }
  return DegreeProfile::from_list(std::move(q));
}

SumResult q_weighted_functional(const DegreeProfile& profile,
                                const SequenceModel& model, std::int64_t horizon,
                                double tol, double divergence_threshold) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  std::int64_t last = horizon;
  if (model.finite_support())
    last = std::min<std::int64_t>(horizon, model.support_end() - 1);

  long double sum = 0.0L;
  long double log_prod = 0.0L;
  std::int64_t dmin = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t k = 0; k <= last; ++k) {
    const long q = profile.degree(k + 1);
    if (q < 2) throw std::invalid_argument("q_weighted_functional requires q_i >= 2");
    dmin = std::min<std::int64_t>(dmin, q);
    const long double lq = logl(static_cast<long double>(q));
    log_prod += lq;
    sum += lq / sqrtl(log_prod) * model.tail_norm(k);
  }

  SumResult r;
  r.value = static_cast<double>(sum);
  // For bounded degrees Q(q; alpha) converges iff Q(alpha) does, and the
  // weight beyond the horizon is at most sqrt(log sup q) / sqrt(k+1)-scaled.
  const auto tail = model.q_tail_upper(last);
  std::optional<double> scaled_tail;
  if (tail) {
    const long maxq = profile.max_degree(last + 1);
    scaled_tail = *tail * std::sqrt(std::log(static_cast<double>(maxq)));
  }
  SumResult base = q_functional(model, std::max<std::int64_t>(horizon, 1), tol,
                                divergence_threshold);
  r.status = base.status;
  if (r.value > divergence_threshold) r.status = Status::diverged;
  if (r.status == Status::converged && scaled_tail) r.tail_bound = *scaled_tail;
  return r;
}

GeneralCriterionResult general_tree_criterion(std::span<const long> dmax_profile,
                                              std::span<const long> dmin_profile,
                                              const SequenceModel& model,
                                              std::int64_t horizon,
                                              double ratio_cap) {
  if (dmax_profile.size() != dmin_profile.size() || dmax_profile.empty())
    throw std::invalid_argument("general_tree_criterion: profile size mismatch");
  if (!model.nonnegative())
    throw std::invalid_argument("general_tree_criterion requires non-negative alpha");
  for (std::size_t i = 0; i < dmin_profile.size(); ++i) {
    if (dmin_profile[i] < 2)
      throw std::invalid_argument("general_tree_criterion requires D_min >= 2");
    if (dmax_profile[i] < dmin_profile[i])
      throw std::invalid_argument("general_tree_criterion: D_max < D_min");
  }

  GeneralCriterionResult res;
  res.max_log_ratio = 0.0;
  for (std::size_t i = 0; i < dmax_profile.size(); ++i) {
    const double ratio = std::log(static_cast<double>(dmax_profile[i])) /
                         std::log(static_cast<double>(dmin_profile[i]));
    res.max_log_ratio = std::max(res.max_log_ratio, ratio);
  }
  res.assumption_ok = res.max_log_ratio <= ratio_cap;

  const std::int64_t levels = static_cast<std::int64_t>(dmax_profile.size());
  std::int64_t last = std::min<std::int64_t>(horizon, levels - 1);
  if (model.finite_support())
    last = std::min<std::int64_t>(last, model.support_end() - 1);
  long double sum = 0.0L, log_prod = 0.0L;
  for (std::int64_t l = 0; l <= last; ++l) {
    const long double lq = logl(static_cast<long double>(dmax_profile[l]));
    log_prod += lq;
    sum += model.tail_norm(l) * lq / sqrtl(log_prod);
  }
  res.value = static_cast<double>(sum);

  // Status inherits from the degree-weighted criterion over a constant
  // upper-bound profile when the ratio assumption holds.
  SumResult base = q_functional(model, std::max<std::int64_t>(horizon, 1));
  res.status = base.status;
  if (res.value > kDefaultDivergenceThreshold) res.status = Status::diverged;
  if (!res.assumption_ok) res.status = Status::undetermined;
  return res;
}

TreeSpec::TreeSpec(std::vector<std::vector<long>> parents)
    : parents_(std::move(parents)) {
  std::int64_t prev_width = 1;
  for (std::size_t n = 0; n < parents_.size(); ++n) {
    if (parents_[n].empty())
      throw std::invalid_argument("TreeSpec: empty generation");
    for (long p : parents_[n])
      if (p < 0 || p >= prev_width)
        throw std::invalid_argument("TreeSpec: parent index out of range");
    if (!std::is_sorted(parents_[n].begin(), parents_[n].end()))
      throw std::invalid_argument("TreeSpec: parent indices must be sorted");
    prev_width = static_cast<std::int64_t>(parents_[n].size());
  }
  index_children();
}

void TreeSpec::index_children() {
  child_counts_.assign(parents_.size(), {});
  std::int64_t prev_width = 1;
  for (std::size_t n = 0; n < parents_.size(); ++n) {
    child_counts_[n].assign(static_cast<std::size_t>(prev_width), 0);
    for (long p : parents_[n]) ++child_counts_[n][static_cast<std::size_t>(p)];
    prev_width = static_cast<std::int64_t>(parents_[n].size());
  }
  // No leaves within the represented depth.
  for (const auto& gen : child_counts_)
    for (long c : gen)
      if (c < 1) throw std::invalid_argument("TreeSpec: internal vertex with no children");
}

std::int64_t TreeSpec::width(std::int64_t generation) const {
  if (generation == 0) return 1;
  return static_cast<std::int64_t>(parents_.at(generation - 1).size());
}

long TreeSpec::parent(std::int64_t generation, std::int64_t index) const {
  return parents_.at(generation - 1).at(index);
}

long TreeSpec::child_count(std::int64_t generation, std::int64_t index) const {
  return child_counts_.at(generation).at(index);
}

long TreeSpec::dmin(std::int64_t generation) const {
  const auto& g = child_counts_.at(generation);
  return *std::min_element(g.begin(), g.end());
}

long TreeSpec::dmax(std::int64_t generation) const {
  const auto& g = child_counts_.at(generation);
  return *std::max_element(g.begin(), g.end());
}

std::string TreeSpec::serialize() const {
  std::ostringstream os;
  for (const auto& gen : parents_) {
    for (std::size_t i = 0; i < gen.size(); ++i) os << (i ? " " : "") << gen[i];
    os << "\n";
  }
  return os.str();
}

TreeSpec TreeSpec::parse(std::istream& in) {
  std::vector<std::vector<long>> parents;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<long> gen;
    long v;
    while (ls >> v) gen.push_back(v);
    if (!gen.empty()) parents.push_back(std::move(gen));
  }
  return TreeSpec(std::move(parents));
}

TreeSpec build_tq(const DegreeProfile& profile, std::int64_t depth,
                  std::int64_t vertex_budget) {
  if (depth < 0) throw std::invalid_argument("build_tq requires depth >= 0");
  if (profile.vertices_to_depth(depth) > static_cast<double>(vertex_budget))
    throw resource_error(
        "build_tq: vertex budget exceeded; use the streaming sampler for trees "
        "this large");
  std::vector<std::vector<long>> parents;
  std::int64_t prev_width = 1;
  for (std::int64_t n = 1; n <= depth; ++n) {
    const long q = profile.degree(n);
    std::vector<long> gen;
    gen.reserve(static_cast<std::size_t>(prev_width * q));
    for (std::int64_t p = 0; p < prev_width; ++p)
      for (long c = 0; c < q; ++c) gen.push_back(static_cast<long>(p));
    prev_width = static_cast<std::int64_t>(gen.size());
    parents.push_back(std::move(gen));
  }
  return TreeSpec(std::move(parents));
}

double boundary_distance(const RayPrefix& a, const RayPrefix& b) {
  if (a.tree == nullptr || a.tree != b.tree)
    throw std::invalid_argument("boundary_distance: prefixes from different trees");
  const std::size_t n = std::min(a.vertices.size(), b.vertices.size());
  std::size_t common = 0;  // depth of deepest common vertex (root = 0)
  while (common < n && a.vertices[common] == b.vertices[common]) ++common;
  if (common == a.vertices.size() && common == b.vertices.size()) return 0.0;
  return std::pow(2.0, -static_cast<double>(common));
}

EmbeddingPlan embed_profiles(const DegreeProfile& sub, const DegreeProfile& super,
                             std::int64_t depth) {
  for (std::int64_t n = 1; n <= depth; ++n)
    if (sub.degree(n) > super.degree(n))
      throw std::invalid_argument("embed_profiles: sub profile exceeds super profile");
  EmbeddingPlan plan;
  plan.map.resize(static_cast<std::size_t>(depth) + 1);
  plan.map[0] = {0};
  for (std::int64_t n = 1; n <= depth; ++n) {
    const long sq = sub.degree(n);
    const long pq = super.degree(n);
    const auto& prev = plan.map[n - 1];
    auto& cur = plan.map[n];
    cur.resize(prev.size() * static_cast<std::size_t>(sq));
    for (std::size_t v = 0; v < prev.size(); ++v)
      for (long c = 0; c < sq; ++c)
        cur[v * sq + c] = prev[v] * pq + c;
  }
  return plan;
}

}  // namespace gstree
