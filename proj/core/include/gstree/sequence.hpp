#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gstree {

enum class Status { converged, diverged, undetermined };
enum class Verdict3 { holds, fails, undetermined };

const char* to_string(Status s);
const char* to_string(Verdict3 v);

// Result of a series evaluation at a finite horizon.
struct SumResult {
  double value = 0.0;          // partial sum up to the horizon
  Status status = Status::undetermined;
  double tail_bound = 0.0;     // certified upper bound on the omitted tail, if any
};

// A square-summable weight sequence (alpha_k)_{k>=1}, alpha_0 = 0 by
// convention.  Either an explicit finite-support list or one of a small
// set of parametric families with closed-form (or certified) tails.
//
// Families:
//   geometric(r)        alpha_k = r^k,             0 < r < 1
//   power(p)            alpha_k = k^(-p),          p > 1/2
//   lacunary_pow2()     alpha_k = n^(-2) if k = 2^n, else 0
//   even_index()        alpha_k = n^(-2) if k = 2n, else 0
//   constant_prefix(n,c) alpha_k = c for k <= n, else 0
class SequenceModel {
 public:
  enum class Kind { finite, geometric, power, lacunary_pow2, even_index, constant_prefix };
  enum class Knowledge { yes, no, unknown };

  static SequenceModel finite(std::vector<double> values);
  static SequenceModel geometric(double ratio);
  static SequenceModel power(double exponent);
  static SequenceModel lacunary_pow2();
  static SequenceModel even_index();
  static SequenceModel constant_prefix(long n, double height = 1.0);

  Kind kind() const { return kind_; }
  std::string describe() const;

  // alpha_k for k >= 0 (alpha_0 == 0).
  double value(std::int64_t k) const;

  // sum_{k >= l+1} alpha_k^2, exact for finite support and closed-form
  // families (certified error below 1e-14 relative elsewhere).
  double tail_sq(std::int64_t l) const;
  double tail_norm(std::int64_t l) const;  // Q_l

  bool finite_support() const;
  // Largest k with alpha_k != 0 (0 for the zero sequence).  Only
  // meaningful when finite_support().
  std::int64_t support_end() const;

  bool nonnegative() const;
  bool nonincreasing() const;

  // Analytic convergence knowledge, used for divergence verdicts that no
  // finite partial sum can prove.
  Knowledge q_convergent() const;          // Q(alpha) < inf
  Knowledge sum_abs_convergent() const;    // sum alpha_k < inf
  Knowledge variation_convergent() const;  // sum k|alpha_{k+1}-alpha_k| < inf

  // Certified upper bound on sum_{l > horizon} Q_l/sqrt(l+1), when the
  // family admits one.
  std::optional<double> q_tail_upper(std::int64_t horizon) const;

  const std::vector<double>& values() const { return values_; }
  double param() const { return param_; }
  long prefix_len() const { return prefix_len_; }

 private:
  SequenceModel(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<double> values_;     // finite support
  std::vector<double> suffix_sq_;  // finite support: suffix_sq_[l] = sum_{k>l} alpha_k^2
  double param_ = 0.0;             // ratio / exponent / prefix height
  long prefix_len_ = 0;            // constant_prefix
};

// Three-valued report for conditions (c-1)/(c-2)/(c-3).
struct ConditionReport {
  SumResult q;          // Q(alpha) partial sums           (c-2)
  SumResult sum_abs;    // sum alpha_k                     (c-3)
  SumResult variation;  // sum k |alpha_{k+1} - alpha_k|   (c-1, with alpha_k -> 0)
  Verdict3 c1 = Verdict3::undetermined;
  Verdict3 c2 = Verdict3::undetermined;
  Verdict3 c3 = Verdict3::undetermined;
  std::int64_t horizon = 0;
};

struct ChainReport {
  double q = 0.0;
  double sum_abs = 0.0;
  double variation = 0.0;
  bool monotone = false;
};

inline constexpr double kDefaultDivergenceThreshold = 1e6;
inline constexpr std::int64_t kDefaultHorizon = 10000;

double tail_norm(const SequenceModel& model, std::int64_t l);

// Partial sums of Q(alpha) = sum_l Q_l(alpha)/sqrt(l+1) with three-valued
// status at the horizon.
SumResult q_functional(const SequenceModel& model, std::int64_t horizon,
                       double tol = 1e-6,
                       double divergence_threshold = kDefaultDivergenceThreshold);

ConditionReport condition_report(const SequenceModel& model, std::int64_t horizon);

// Evaluates Q, sum alpha, and the variation on finite support and asserts
// Q <= 2 variation, sum <= 4 Q, and (non-increasing case) variation <= 2 sum.
// Throws consistency_error on violation.
ChainReport chain_inequalities(const SequenceModel& model);

// alpha[l]: entry alpha_k moved to position l_1 + ... + l_k.
SequenceModel block_embed(const SequenceModel& model, std::span<const long> blocks);

// Keeps entries with first <= k <= first+length (length absent: all k >= first).
SequenceModel truncate_window(const SequenceModel& model, std::int64_t first,
                              std::optional<std::int64_t> length);

// alpha^{(n)}: keeps entries with k <= n.
SequenceModel prefix(const SequenceModel& model, std::int64_t n);

// B(N) = 2 sqrt(N) Q_{N-1} + sum_{l=N}^{horizon} Q_l/sqrt(l+1) (+ certified tail).
double tail_bracket(const SequenceModel& model, std::int64_t first,
                    std::int64_t horizon);

// r_n = (a_1 + ... + a_n) / psi(n); psi positive non-decreasing.
std::vector<double> kronecker_residuals(std::span<const double> a,
                                        std::span<const double> psi);

// Reads one value per line; blank lines ignored.
SequenceModel load_sequence_file(const std::string& path);

}  // namespace gstree
