#include "gstree/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <thread>

#include "gstree/errors.hpp"
#include "gstree/rng.hpp"
#include "gstree/traversal.hpp"

namespace gstree {
namespace {

void check_budget(const DegreeProfile& profile, int depth,
                  std::int64_t vertex_budget) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (profile.vertices_to_depth(depth) > static_cast<double>(vertex_budget))
    throw resource_error("vertex budget exceeded for depth " +
                         std::to_string(depth));
}

std::vector<double> alpha_by_level(const SequenceModel& model, int depth) {
  std::vector<double> a(static_cast<std::size_t>(depth) + 1, 0.0);
  for (int l = 1; l <= depth; ++l) a[l] = model.value(l);
  return a;
}

// Materializes per-replica row vectors, split across workers by replica
// range.  The layout (and later the sequential reduction) is what makes
// results independent of the worker count.
template <class Fn>
std::vector<double> replica_matrix(std::int64_t replicas, std::size_t cols,
                                   int workers, Fn&& fn) {
  std::vector<double> m(static_cast<std::size_t>(replicas) * cols);
  const int nw = std::max(1, workers);
  auto run_range = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r) {
      const std::vector<double> row = fn(r);
      std::copy(row.begin(), row.end(),
                m.begin() + static_cast<std::size_t>(r) * cols);
    }
  };
  if (nw == 1 || replicas < 2 * nw) {
    run_range(0, replicas);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (replicas + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
      const std::int64_t lo = w * chunk;
      const std::int64_t hi = std::min<std::int64_t>(replicas, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  return m;
}

RunStats reduce_matrix(const std::vector<double>& m, std::int64_t replicas,
                       std::span<const std::int64_t> depths, double confidence,
                       double wall_seconds) {
  const std::size_t cols = depths.size();
  RunStats s;
  s.depth.assign(depths.begin(), depths.end());
  s.mean.resize(cols);
  s.second_moment.resize(cols);
  s.half_width.resize(cols);
  s.second_half_width.resize(cols);
  s.replicas = replicas;
  s.confidence = confidence;
  s.wall_seconds = wall_seconds;
  const double z = normal_quantile_two_sided(confidence);
  const double n = static_cast<double>(replicas);
  for (std::size_t j = 0; j < cols; ++j) {
    long double s1 = 0.0L, s2 = 0.0L, s4 = 0.0L;
    for (std::int64_t r = 0; r < replicas; ++r) {
      const long double v = m[static_cast<std::size_t>(r) * cols + j];
      const long double v2 = v * v;
      s1 += v;
      s2 += v2;
      s4 += v2 * v2;
    }
    const double mean = static_cast<double>(s1 / n);
    const double m2 = static_cast<double>(s2 / n);
    s.mean[j] = mean;
    s.second_moment[j] = m2;
    if (replicas >= 2) {
      const double var1 =
          std::max(0.0, (static_cast<double>(s2) - n * mean * mean) / (n - 1.0));
      const double var2 =
          std::max(0.0, (static_cast<double>(s4) - n * m2 * m2) / (n - 1.0));
      s.half_width[j] = z * std::sqrt(var1 / n);
      s.second_half_width[j] = z * std::sqrt(var2 / n);
    }
  }
  return s;
}

std::vector<std::int64_t> depth_axis(int depth) {
  std::vector<std::int64_t> d(static_cast<std::size_t>(depth));
  for (int l = 1; l <= depth; ++l) d[l - 1] = l;
  return d;
}

}  // namespace

double normal_quantile_two_sided(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("confidence must be in (0,1)");
  // Acklam's rational approximation to the normal inverse CDF, refined by
  // one Halley step; accurate to ~1e-15 which is far below sampling noise.
  const double p = 1.0 - (1.0 - confidence) / 2.0;
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

std::vector<double> sample_level_maxima(const RunConfig& config,
                                        std::int64_t replica_id,
                                        Statistic stat) {
  check_budget(config.profile, config.depth, config.vertex_budget);
  const auto alpha = alpha_by_level(config.model, config.depth);
  LevelMaxVisitor visitor(alpha, config.depth);
  GaussianGen gauss(substream_seed(config.seed, static_cast<std::uint64_t>(replica_id)));
  dfs_traverse(config.profile, config.depth, [&] { return gauss(); }, visitor);
  std::vector<double> out(static_cast<std::size_t>(config.depth));
  for (int l = 1; l <= config.depth; ++l)
    out[l - 1] = stat == Statistic::level_max_signed ? visitor.max_signed[l]
                                                     : visitor.max_abs[l];
  if (stat == Statistic::running_max)
    for (int l = 1; l < config.depth; ++l)
      out[l] = std::max(out[l], out[l - 1]);
  return out;
}

RunStats estimate_moments(const RunConfig& config, Statistic stat) {
  if (config.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  check_budget(config.profile, config.depth, config.vertex_budget);
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = replica_matrix(
      config.replicas, static_cast<std::size_t>(config.depth), config.workers,
      [&](std::int64_t r) { return sample_level_maxima(config, r, stat); });
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto depths = depth_axis(config.depth);
  return reduce_matrix(m, config.replicas, depths, config.confidence, wall);
}

double tail_sup_one(const RunConfig& config, std::int64_t replica_id,
                    std::int64_t first_level) {
  if (first_level < 1 || first_level > config.depth)
    throw std::invalid_argument("tail_sup: need 1 <= N <= depth");
  check_budget(config.profile, config.depth, config.vertex_budget);
  const auto alpha = alpha_by_level(config.model, config.depth);
  TailSupVisitor visitor(alpha, config.depth, static_cast<int>(first_level));
  GaussianGen gauss(substream_seed(config.seed, static_cast<std::uint64_t>(replica_id)));
  dfs_traverse(config.profile, config.depth, [&] { return gauss(); }, visitor);
  return visitor.best;
}

RunStats tail_sup_statistic(const RunConfig& config, std::int64_t first_level) {
  if (config.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = replica_matrix(
      config.replicas, 1, config.workers, [&](std::int64_t r) {
        return std::vector<double>{tail_sup_one(config, r, first_level)};
      });
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::int64_t row[] = {config.depth};
  return reduce_matrix(m, config.replicas, row, config.confidence, wall);
}

std::vector<std::pair<double, double>> coupled_domination(
    const DegreeProfile& sub, const DegreeProfile& super,
    const SequenceModel& model, int depth, std::uint64_t seed,
    std::int64_t replicas, std::int64_t vertex_budget) {
  for (int n = 1; n <= depth; ++n)
    if (sub.degree(n) > super.degree(n))
      throw std::invalid_argument(
          "coupled_domination: sub degree exceeds super degree at level " +
          std::to_string(n));
  check_budget(super, depth, vertex_budget);
  const auto alpha = alpha_by_level(model, depth);
  std::vector<long> sub_deg(static_cast<std::size_t>(depth) + 1, 0);
  for (int n = 1; n <= depth; ++n) sub_deg[n] = sub.degree(n);

  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(replicas));
  for (std::int64_t r = 0; r < replicas; ++r) {
    CoupledVisitor visitor(alpha, sub_deg, depth);
    GaussianGen gauss(substream_seed(seed, static_cast<std::uint64_t>(r)));
    dfs_traverse(super, depth, [&] { return gauss(); }, visitor);
    out.emplace_back(visitor.max_sub[depth], visitor.max_super[depth]);
  }
  return out;
}

BrwStats brw_displacement(const RunConfig& config) {
  if (config.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  check_budget(config.profile, config.depth, config.vertex_budget);
  const std::size_t n = static_cast<std::size_t>(config.depth);
  const auto alpha = alpha_by_level(config.model, config.depth);
  const auto t0 = std::chrono::steady_clock::now();
  // One traversal yields both statistics; rows hold signed then absolute.
  const auto m = replica_matrix(
      config.replicas, 2 * n, config.workers, [&](std::int64_t r) {
        LevelMaxVisitor visitor(alpha, config.depth);
        GaussianGen gauss(
            substream_seed(config.seed, static_cast<std::uint64_t>(r)));
        dfs_traverse(config.profile, config.depth, [&] { return gauss(); },
                     visitor);
        std::vector<double> row(2 * n);
        for (std::size_t l = 1; l <= n; ++l) {
          row[l - 1] = visitor.max_signed[l];
          row[n + l - 1] = visitor.max_abs[l];
        }
        return row;
      });
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto depths = depth_axis(config.depth);

  std::vector<double> part(static_cast<std::size_t>(config.replicas) * n);
  BrwStats out;
  for (int half = 0; half < 2; ++half) {
    for (std::int64_t r = 0; r < config.replicas; ++r)
      std::copy_n(m.begin() + static_cast<std::size_t>(r) * 2 * n + half * n, n,
                  part.begin() + static_cast<std::size_t>(r) * n);
    RunStats s =
        reduce_matrix(part, config.replicas, depths, config.confidence, wall);
    (half == 0 ? out.signed_max : out.absolute_max) = std::move(s);
  }
  return out;
}

std::vector<double> two_weight_sample(const RunConfig& config,
                                      std::int64_t replica_id,
                                      const WeightFn& alpha_fn,
                                      const WeightFn& sigma_fn) {
  check_budget(config.profile, config.depth, config.vertex_budget);
  std::vector<double> alpha(static_cast<std::size_t>(config.depth) + 1, 0.0);
  std::vector<double> sigma(static_cast<std::size_t>(config.depth) + 1, 0.0);
  for (int l = 1; l <= config.depth; ++l) {
    alpha[l] = alpha_fn(l);
    sigma[l] = sigma_fn(l);
    if (!std::isfinite(alpha[l]) || !std::isfinite(sigma[l]))
      throw std::invalid_argument("two_weight: weight undefined at depth " +
                                  std::to_string(l));
  }
  TwoWeightVisitor visitor(alpha, sigma, config.depth);
  GaussianGen gauss(substream_seed(config.seed, static_cast<std::uint64_t>(replica_id)));
  dfs_traverse(config.profile, config.depth, [&] { return gauss(); }, visitor);
  return {visitor.max_abs.begin() + 1, visitor.max_abs.end()};
}

RunStats two_weight_moments(const RunConfig& config, const WeightFn& alpha_fn,
                            const WeightFn& sigma_fn) {
  if (config.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = replica_matrix(
      config.replicas, static_cast<std::size_t>(config.depth), config.workers,
      [&](std::int64_t r) {
        return two_weight_sample(config, r, alpha_fn, sigma_fn);
      });
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto depths = depth_axis(config.depth);
  return reduce_matrix(m, config.replicas, depths, config.confidence, wall);
}

}  // namespace gstree
