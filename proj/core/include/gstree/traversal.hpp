#pragma once

#include <cstdint>
#include <vector>

#include "gstree/trees.hpp"

namespace gstree {

// Streaming depth-first preorder traversal of T(q) down to `depth`.
// One fresh draw from `gauss` per visited vertex (root excluded), in
// visitation order.  The visitor sees
//   enter(level, child_index, z)   preorder, level in 1..depth
//   leave(level)                   postorder
// Memory is O(depth); every vertex is visited exactly once.
template <class Gauss, class Visitor>
void dfs_traverse(const DegreeProfile& profile, int depth, Gauss&& gauss,
                  Visitor&& visitor) {
  if (depth <= 0) return;
  std::vector<long> deg(static_cast<std::size_t>(depth) + 1, 0);
  for (int l = 1; l <= depth; ++l) deg[l] = profile.degree(l);
  std::vector<long> next(static_cast<std::size_t>(depth) + 2, 0);

  int level = 0;
  next[1] = 0;
  for (;;) {
    if (level < depth && next[level + 1] < deg[level + 1]) {
      const long child = next[level + 1]++;
      const double z = gauss();
      ++level;
      if (level < depth) next[level + 1] = 0;
      visitor.enter(level, child, z);
    } else {
      if (level == 0) break;
      visitor.leave(level);
      --level;
    }
  }
}

// Per-level maxima of |S(v)| and S(v) for S(v) = sum alpha_k z_k along the
// root path.
struct LevelMaxVisitor {
  explicit LevelMaxVisitor(const std::vector<double>& alpha_by_level, int depth)
      : alpha(alpha_by_level),
        path(static_cast<std::size_t>(depth) + 1, 0.0),
        max_abs(static_cast<std::size_t>(depth) + 1, 0.0),
        max_signed(static_cast<std::size_t>(depth) + 1,
                   -std::numeric_limits<double>::infinity()) {}

  void enter(int level, long, double z) {
    const double s = path[level - 1] + alpha[level] * z;
    path[level] = s;
    const double a = s < 0.0 ? -s : s;
    if (a > max_abs[level]) max_abs[level] = a;
    if (s > max_signed[level]) max_signed[level] = s;
  }
  void leave(int) {}

  const std::vector<double>& alpha;  // alpha[l], l = 1..depth
  std::vector<double> path;
  std::vector<double> max_abs;     // M_l
  std::vector<double> max_signed;  // signed displacement maxima
};

// sup over windows [n, n+m] with n >= first and rays of |P_{n+m} - P_{n-1}|.
struct TailSupVisitor {
  TailSupVisitor(const std::vector<double>& alpha_by_level, int depth, int first_level)
      : alpha(alpha_by_level),
        first(first_level),
        path(static_cast<std::size_t>(depth) + 1, 0.0),
        lo(static_cast<std::size_t>(depth) + 1, 0.0),
        hi(static_cast<std::size_t>(depth) + 1, 0.0) {
    lo[0] = hi[0] = first <= 1 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  }

  void enter(int level, long, double z) {
    const double p = path[level - 1] + alpha[level] * z;
    path[level] = p;
    // window starts allowed at indices i in [first-1, level-1]
    if (level >= first && level - 1 >= first - 1 && !std::isnan(lo[level - 1])) {
      const double up = p - lo[level - 1];
      const double dn = hi[level - 1] - p;
      if (up > best) best = up;
      if (dn > best) best = dn;
    }
    if (level >= first - 1) {
      if (level == first - 1 || std::isnan(lo[level - 1])) {
        lo[level] = hi[level] = p;
      } else {
        lo[level] = p < lo[level - 1] ? p : lo[level - 1];
        hi[level] = p > hi[level - 1] ? p : hi[level - 1];
      }
    } else {
      lo[level] = hi[level] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  void leave(int) {}

  const std::vector<double>& alpha;
  int first;
  std::vector<double> path;
  std::vector<double> lo, hi;  // min/max of P_i over i in [first-1, level]
  double best = 0.0;
};

// Joint traversal of T(super) tracking the embedded copy of T(sub):
// a vertex is marked iff its child index is < sub_degree at every level.
struct CoupledVisitor {
  CoupledVisitor(const std::vector<double>& alpha_by_level,
                 const std::vector<long>& sub_degree_by_level, int depth)
      : alpha(alpha_by_level),
        sub_deg(sub_degree_by_level),
        path(static_cast<std::size_t>(depth) + 1, 0.0),
        marked(static_cast<std::size_t>(depth) + 1, 1),
        max_sub(static_cast<std::size_t>(depth) + 1, 0.0),
        max_super(static_cast<std::size_t>(depth) + 1, 0.0) {}

  void enter(int level, long child, double z) {
    const double s = path[level - 1] + alpha[level] * z;
    path[level] = s;
    const double a = s < 0.0 ? -s : s;
    if (a > max_super[level]) max_super[level] = a;
    const char m = marked[level - 1] && child < sub_deg[level];
    marked[level] = m;
    if (m && a > max_sub[level]) max_sub[level] = a;
  }
  void leave(int) {}

  const std::vector<double>& alpha;
  const std::vector<long>& sub_deg;
  std::vector<double> path;
  std::vector<char> marked;
  std::vector<double> max_sub, max_super;
};

// Per-level maxima of |sigma(l) * sum_{k<=l} alpha(k) z_k|.
struct TwoWeightVisitor {
  TwoWeightVisitor(const std::vector<double>& alpha_by_level,
                   const std::vector<double>& sigma_by_level, int depth)
      : alpha(alpha_by_level),
        sigma(sigma_by_level),
        path(static_cast<std::size_t>(depth) + 1, 0.0),
        max_abs(static_cast<std::size_t>(depth) + 1, 0.0) {}

  void enter(int level, long, double z) {
    const double s = path[level - 1] + alpha[level] * z;
    path[level] = s;
    const double g = sigma[level] * s;
    const double a = g < 0.0 ? -g : g;
    if (a > max_abs[level]) max_abs[level] = a;
  }
  void leave(int) {}

  const std::vector<double>& alpha;
  const std::vector<double>& sigma;
  std::vector<double> path;
  std::vector<double> max_abs;
};

}  // namespace gstree
