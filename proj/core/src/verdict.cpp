#include "gstree/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gstree/errors.hpp"

namespace gstree {
namespace {

Decision decision_from(Status s) {
  switch (s) {
    case Status::converged: return Decision::bounded;
    case Status::diverged: return Decision::unbounded;
    default: return Decision::undetermined;
  }
}

}  // namespace

const char* to_string(Decision d) {
  switch (d) {
    case Decision::bounded: return "bounded";
    case Decision::unbounded: return "unbounded";
    default: return "undetermined";
  }
}

const char* to_string(CriterionKind k) {
  switch (k) {
    case CriterionKind::uniform_q: return "uniform-q";
    case CriterionKind::weighted_q: return "weighted-q";
    case CriterionKind::general_profile: return "general-profile";
    case CriterionKind::monotone_sum: return "monotone-sum";
    default: return "two-weight";
  }
}

VerdictReport boundedness_verdict(const DegreeProfile& profile,
                                  const SequenceModel& model,
                                  std::int64_t horizon) {
  VerdictReport r;
  r.horizon = horizon;
  if (profile.min_degree(horizon) < 2) {
    r.assumption_ok = false;
    r.notes = "degree assumption failed: some q_i < 2 within the horizon";
    return r;
  }

  if (profile.is_constant()) {
    r.criterion = CriterionKind::uniform_q;
    r.evidence = q_functional(model, horizon);
    r.decision = decision_from(r.evidence.status);
    // The monotone rule is sharper when the series verdict stalls.
    if (r.decision == Decision::undetermined && model.nonnegative() &&
        model.nonincreasing()) {
      const ConditionReport c = condition_report(model, horizon);
      if (c.sum_abs.status != Status::undetermined) {
        r.criterion = CriterionKind::monotone_sum;
        r.evidence = c.sum_abs;
        r.decision = decision_from(c.sum_abs.status);
        r.notes = "decided by the partial-sum rule for non-increasing weights";
      }
    }
  } else {
    r.criterion = CriterionKind::weighted_q;
    r.evidence = q_weighted_functional(profile, model, horizon);
    r.decision = decision_from(r.evidence.status);
  }
  if (r.decision == Decision::undetermined && r.notes.empty())
    r.notes = "series status undetermined at the horizon";
  return r;
}

VerdictReport boundedness_verdict(const TreeSpec& tree, const SequenceModel& model,
                                  std::int64_t horizon) {
  VerdictReport r;
  r.criterion = CriterionKind::general_profile;
  r.horizon = std::min<std::int64_t>(horizon, tree.depth());
  if (!model.nonnegative()) {
    r.assumption_ok = false;
    r.notes = "general-profile rule requires non-negative weights";
    return r;
  }
  std::vector<long> dmax, dmin;
  for (std::int64_t g = 0; g < tree.depth(); ++g) {
    dmax.push_back(tree.dmax(g));
    dmin.push_back(tree.dmin(g));
  }
  if (*std::min_element(dmin.begin(), dmin.end()) < 2) {
    r.assumption_ok = false;
    r.notes = "degree assumption failed: some vertex has fewer than 2 children";
    return r;
  }
  const GeneralCriterionResult g =
      general_tree_criterion(dmax, dmin, model, r.horizon);
  r.assumption_ok = g.assumption_ok;
  r.evidence.value = g.value;
  r.evidence.status = g.status;
  r.decision = decision_from(g.status);
  if (!g.assumption_ok)
    r.notes = "log-degree ratio cap exceeded; criterion inapplicable";
  else if (r.decision == Decision::undetermined)
    r.notes = "series status undetermined at the horizon";
  return r;
}

Decision monotone_verdict(const SequenceModel& model, std::int64_t horizon) {
  if (!model.nonnegative() || !model.nonincreasing())
    throw std::invalid_argument(
        "monotone_verdict requires positive non-increasing weights");
  const ConditionReport c = condition_report(model, horizon);
  return decision_from(c.sum_abs.status);
}

Decision two_weight_verdict(const WeightFn& alpha_fn, const WeightFn& sigma_fn,
                            std::int64_t horizon) {
  if (horizon < 2) throw std::invalid_argument("two_weight_verdict: horizon >= 2");
  std::vector<double> phi(static_cast<std::size_t>(horizon) + 2, 0.0);
  for (std::int64_t k = 1; k <= horizon + 1; ++k) {
    phi[k] = alpha_fn(k) * sigma_fn(k);
    if (!std::isfinite(phi[k]))
      throw std::invalid_argument("two_weight_verdict: weight undefined at depth " +
                                  std::to_string(k));
  }

  // Certify Q(phi) < inf either by finite support within the horizon or by
  // a geometric-ratio tail certificate on |phi|.  The rule is sufficient
  // only, so anything short of a certificate stays undetermined.
  std::int64_t last_nonzero = 0;
  for (std::int64_t k = 1; k <= horizon + 1; ++k)
    if (phi[k] != 0.0) last_nonzero = k;
  if (last_nonzero == 0) return Decision::bounded;

  bool certified = last_nonzero <= horizon / 2;
  if (!certified) {
    double max_ratio = 0.0;
    bool gap = false;
    for (std::int64_t k = 1; k < last_nonzero; ++k) {
      if (phi[k] == 0.0) { gap = true; break; }
      max_ratio = std::max(max_ratio, std::fabs(phi[k + 1]) / std::fabs(phi[k]));
    }
    certified = !gap && max_ratio <= 0.999;
  }
  if (!certified) return Decision::undetermined;

  // Q_l over the certified window; the remainder is geometrically small.
  long double sum = 0.0L;
  std::vector<long double> suffix(static_cast<std::size_t>(last_nonzero) + 2, 0.0L);
  for (std::int64_t k = last_nonzero; k >= 1; --k)
    suffix[k] = suffix[k + 1] + static_cast<long double>(phi[k]) * phi[k];
  for (std::int64_t l = 0; l < last_nonzero; ++l)
    sum += sqrtl(suffix[l + 1]) / sqrtl(static_cast<long double>(l) + 1.0L);
  return sum <= kDefaultDivergenceThreshold ? Decision::bounded
                                            : Decision::undetermined;
}

SandwichTable sandwich_experiment(const DegreeProfile& profile,
                                  const SequenceModel& model,
                                  std::span<const std::int64_t> depths,
                                  std::int64_t replicas, std::uint64_t seed,
                                  int workers, std::int64_t vertex_budget) {
  if (depths.empty()) throw std::invalid_argument("sandwich: no depths given");
  const std::int64_t max_depth = *std::max_element(depths.begin(), depths.end());

  RunConfig config{profile, model, static_cast<int>(max_depth), replicas, seed};
  config.workers = workers;
  config.vertex_budget = vertex_budget;
  const RunStats stats = estimate_moments(config, Statistic::level_max_abs);

  SandwichTable table;
  table.replicas = replicas;
  table.seed = seed;
  double lo = 0.0, hi = 0.0;
  bool have_ratio = false;
  for (std::int64_t n : depths) {
    SandwichRow row;
    row.depth = n;
    const SequenceModel head = prefix(model, n);
    if (profile.is_constant()) {
      const double logq = std::log(static_cast<double>(profile.constant_degree()));
      row.q_ref = std::sqrt(logq) * q_functional(head, n + 1).value;
    } else {
      row.q_ref = q_weighted_functional(profile, head, n + 1).value;
    }
    const std::size_t j = static_cast<std::size_t>(n - 1);
    row.moment_est = std::sqrt(stats.second_moment[j]);
    if (row.q_ref <= 0.0) {
      row.skipped = true;
      table.rows.push_back(row);
      continue;
    }
    row.ratio = row.moment_est / row.q_ref;
    const double m_lo = std::max(0.0, stats.second_moment[j] - stats.second_half_width[j]);
    const double m_hi = stats.second_moment[j] + stats.second_half_width[j];
    row.ratio_lo = std::sqrt(m_lo) / row.q_ref;
    row.ratio_hi = std::sqrt(m_hi) / row.q_ref;
    if (!have_ratio) {
      lo = hi = row.ratio;
      have_ratio = true;
    } else {
      lo = std::min(lo, row.ratio);
      hi = std::max(hi, row.ratio);
    }
    table.rows.push_back(row);
  }
  table.min_ratio = lo;
  table.max_ratio = hi;
  return table;
}

}  // namespace gstree
