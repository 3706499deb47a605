#include "gstree/sequence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gstree/errors.hpp"

namespace gstree {
namespace {

// sum_{k >= m} k^{-s} for s > 1, m >= 1: explicit head plus
// Euler-Maclaurin remainder.  Absolute error well below 1e-16 * value.
long double hurwitz_tail(double s, std::int64_t m) {
  const std::int64_t head = m + 64;
  long double sum = 0.0L;
  for (std::int64_t k = head - 1; k >= m; --k)
    sum += powl(static_cast<long double>(k), -static_cast<long double>(s));
  const long double M = static_cast<long double>(head);
  const long double Ms = powl(M, -static_cast<long double>(s));
  sum += Ms * M / (s - 1.0L) + Ms / 2.0L + s * Ms / M / 12.0L -
         s * (s + 1.0L) * (s + 2.0L) * Ms / (M * M * M) / 720.0L;
  return sum;
}

Status status_from(SequenceModel::Knowledge k, double partial, double threshold,
                   std::optional<double> tail, double tol) {
  (void)tol;
  (void)tail;
  if (k == SequenceModel::Knowledge::no) return Status::diverged;
  if (partial > threshold) return Status::diverged;
  // An analytic certificate outranks any finite tail estimate; the tail
  // bound still travels with the result as an accuracy statement.
  if (k == SequenceModel::Knowledge::yes) return Status::converged;
  return Status::undetermined;
}

Verdict3 verdict_from(Status s) {
  switch (s) {
    case Status::converged: return Verdict3::holds;
    case Status::diverged: return Verdict3::fails;
    default: return Verdict3::undetermined;
  }
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::converged: return "converged";
    case Status::diverged: return "diverged";
    default: return "undetermined";
  }
}

const char* to_string(Verdict3 v) {
  switch (v) {
    case Verdict3::holds: return "holds";
    case Verdict3::fails: return "fails";
    default: return "undetermined";
  }
}

SequenceModel SequenceModel::finite(std::vector<double> values) {
  SequenceModel m(Kind::finite);
  // Drop trailing zeros so support_end is tight.
  while (!values.empty() && values.back() == 0.0) values.pop_back();
  m.values_ = std::move(values);
  const std::size_t k = m.values_.size();
  m.suffix_sq_.assign(k + 1, 0.0);
  long double acc = 0.0L;
  for (std::size_t i = k; i-- > 0;) {
    acc += static_cast<long double>(m.values_[i]) * m.values_[i];
    m.suffix_sq_[i] = static_cast<double>(acc);
  }
  return m;
}

SequenceModel SequenceModel::geometric(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("geometric family requires 0 < ratio < 1");
  SequenceModel m(Kind::geometric);
  m.param_ = ratio;
  return m;
}

SequenceModel SequenceModel::power(double exponent) {
  if (!(exponent > 0.5))
    throw std::invalid_argument("power family requires exponent > 1/2 for square-summability");
  SequenceModel m(Kind::power);
  m.param_ = exponent;
  return m;
}

SequenceModel SequenceModel::lacunary_pow2() { return SequenceModel(Kind::lacunary_pow2); }
SequenceModel SequenceModel::even_index() { return SequenceModel(Kind::even_index); }

SequenceModel SequenceModel::constant_prefix(long n, double height) {
  if (n < 0) throw std::invalid_argument("constant_prefix requires n >= 0");
  SequenceModel m(Kind::constant_prefix);
  m.prefix_len_ = n;
  m.param_ = height;
  return m;
}

std::string SequenceModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::finite:
      os << "finite[" << values_.size() << "]";
      break;
    case Kind::geometric:
      os << "geometric:" << param_;
      break;
    case Kind::power:
      os << "power:" << param_;
      break;
    case Kind::lacunary_pow2:
      os << "remark-lacunary";
      break;
    case Kind::even_index:
      os << "remark-even";
      break;
    case Kind::constant_prefix:
      os << "ones:" << prefix_len_ << "x" << param_;
      break;
  }
  return os.str();
}

double SequenceModel::value(std::int64_t k) const {
  if (k <= 0) return 0.0;
  switch (kind_) {
    case Kind::finite:
      return k <= static_cast<std::int64_t>(values_.size()) ? values_[k - 1] : 0.0;
    case Kind::geometric:
      return std::pow(param_, static_cast<double>(k));
    case Kind::power:
      return std::pow(static_cast<double>(k), -param_);
    case Kind::lacunary_pow2: {
      if (k < 2 || (k & (k - 1)) != 0) return 0.0;
      const int n = std::bit_width(static_cast<std::uint64_t>(k)) - 1;  // k = 2^n, n >= 1
      return 1.0 / (static_cast<double>(n) * n);
    }
    case Kind::even_index: {
      if (k % 2 != 0) return 0.0;
      const double n = static_cast<double>(k / 2);
      return 1.0 / (n * n);
    }
    case Kind::constant_prefix:
      return k <= prefix_len_ ? param_ : 0.0;
  }
  return 0.0;
}

double SequenceModel::tail_sq(std::int64_t l) const {
  if (l < 0) throw std::invalid_argument("tail_sq requires l >= 0");
  switch (kind_) {
    case Kind::finite: {
      const std::int64_t k = static_cast<std::int64_t>(values_.size());
      return l >= k ? 0.0 : suffix_sq_[l];
    }
    case Kind::geometric: {
      // sum_{k>l} r^{2k} = r^{2(l+1)} / (1 - r^2)
      const double r2 = param_ * param_;
      return std::pow(r2, static_cast<double>(l + 1)) / (1.0 - r2);
    }
    case Kind::power:
      return static_cast<double>(hurwitz_tail(2.0 * param_, l + 1));
    case Kind::lacunary_pow2: {
      // entries at k = 2^n with 2^n >= l+1
      const std::int64_t n0 =
          l == 0 ? 1 : std::bit_width(static_cast<std::uint64_t>(l));
      return static_cast<double>(hurwitz_tail(4.0, std::max<std::int64_t>(n0, 1)));
    }
    case Kind::even_index:
      // entries at k = 2n with 2n >= l+1, i.e. n >= floor(l/2)+1
      return static_cast<double>(hurwitz_tail(4.0, l / 2 + 1));
    case Kind::constant_prefix: {
      const std::int64_t left = prefix_len_ - l;
      return left > 0 ? param_ * param_ * static_cast<double>(left) : 0.0;
    }
  }
  return 0.0;
}

double SequenceModel::tail_norm(std::int64_t l) const { return std::sqrt(tail_sq(l)); }

bool SequenceModel::finite_support() const {
  return kind_ == Kind::finite || kind_ == Kind::constant_prefix;
}

std::int64_t SequenceModel::support_end() const {
  if (kind_ == Kind::finite) return static_cast<std::int64_t>(values_.size());
  if (kind_ == Kind::constant_prefix) return param_ == 0.0 ? 0 : prefix_len_;
  throw std::invalid_argument("support_end: model has infinite support");
}

bool SequenceModel::nonnegative() const {
  if (kind_ != Kind::finite)
    return kind_ != Kind::constant_prefix || param_ >= 0.0;
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

bool SequenceModel::nonincreasing() const {
  switch (kind_) {
    case Kind::finite:
      return std::is_sorted(values_.rbegin(), values_.rend());
    case Kind::geometric:
    case Kind::power:
      return true;
    case Kind::constant_prefix:
      return param_ >= 0.0;
    default:
      return false;
  }
}

SequenceModel::Knowledge SequenceModel::q_convergent() const {
  switch (kind_) {
    case Kind::finite:
    case Kind::constant_prefix:
    case Kind::geometric:
    case Kind::even_index:
      return Knowledge::yes;
    case Kind::power:
      return param_ > 1.0 ? Knowledge::yes : Knowledge::no;
    case Kind::lacunary_pow2:
      return Knowledge::no;
  }
  return Knowledge::unknown;
}

SequenceModel::Knowledge SequenceModel::sum_abs_convergent() const {
  switch (kind_) {
    case Kind::finite:
    case Kind::constant_prefix:
    case Kind::geometric:
    case Kind::even_index:
    case Kind::lacunary_pow2:
      return Knowledge::yes;
    case Kind::power:
      return param_ > 1.0 ? Knowledge::yes : Knowledge::no;
  }
  return Knowledge::unknown;
}

SequenceModel::Knowledge SequenceModel::variation_convergent() const {
  switch (kind_) {
    case Kind::finite:
    case Kind::constant_prefix:
    case Kind::geometric:
      return Knowledge::yes;
    case Kind::power:
      return param_ > 1.0 ? Knowledge::yes : Knowledge::no;
    case Kind::lacunary_pow2:
    case Kind::even_index:
      // terms k|alpha_{k+1}-alpha_k| contribute ~ 2^n/n^2 resp. ~ 4/n
      return Knowledge::no;
  }
  return Knowledge::unknown;
}

std::optional<double> SequenceModel::q_tail_upper(std::int64_t horizon) const {
  if (finite_support()) {
    const std::int64_t k = (kind_ == Kind::finite)
                               ? static_cast<std::int64_t>(values_.size())
                               : prefix_len_;
    long double rest = 0.0L;
    for (std::int64_t l = horizon + 1; l < k; ++l)
      rest += tail_norm(l) / std::sqrt(static_cast<double>(l + 1));
    return static_cast<double>(rest);
  }
  switch (kind_) {
    case Kind::geometric: {
      const double r = param_;
      return std::pow(r, static_cast<double>(horizon + 2)) /
             ((1.0 - r) * std::sqrt(1.0 - r * r) *
              std::sqrt(static_cast<double>(horizon + 2)));
    }
    case Kind::power: {
      const double p = param_;
      if (p <= 1.0) return std::nullopt;
      return std::pow(static_cast<double>(horizon), 1.0 - p) /
             ((p - 1.0) * std::sqrt(2.0 * p - 1.0));
    }
    case Kind::even_index: {
      if (horizon < 2) return std::nullopt;
      // Q_l <= ((l-1)/2)^(-3/2)/sqrt(3) and sum_{l>H} (l-1)^(-2) <= 1/(H-1)
      return (2.0 * std::numbers::sqrt2 / std::sqrt(3.0)) /
             static_cast<double>(horizon - 1);
    }
    default:
      return std::nullopt;
  }
}

double tail_norm(const SequenceModel& model, std::int64_t l) {
  return model.tail_norm(l);
}

SumResult q_functional(const SequenceModel& model, std::int64_t horizon,
                       double tol, double divergence_threshold) {
  if (horizon < 1) throw std::invalid_argument("q_functional requires horizon >= 1");
  std::int64_t last = horizon;
  if (model.finite_support())
    last = std::min<std::int64_t>(horizon, model.support_end() - 1);
  long double sum = 0.0L;
  for (std::int64_t l = last; l >= 0; --l)
    sum += model.tail_norm(l) / std::sqrt(static_cast<double>(l + 1));
  SumResult r;
  r.value = static_cast<double>(sum);
  const auto tail = model.q_tail_upper(horizon);
  if (tail) r.tail_bound = *tail;
  r.status = status_from(model.q_convergent(), r.value, divergence_threshold, tail, tol);
  return r;
}

ConditionReport condition_report(const SequenceModel& model, std::int64_t horizon) {
  if (!model.nonnegative())
    throw std::invalid_argument("condition_report requires non-negative entries");
  ConditionReport rep;
  rep.horizon = horizon;
  rep.q = q_functional(model, horizon);

  long double sum_abs = 0.0L, variation = 0.0L;
  for (std::int64_t k = horizon; k >= 1; --k) {
    sum_abs += model.value(k);
    variation += static_cast<long double>(k) *
                 std::fabs(model.value(k + 1) - model.value(k));
  }
  rep.sum_abs.value = static_cast<double>(sum_abs);
  rep.sum_abs.status = status_from(model.sum_abs_convergent(), rep.sum_abs.value,
                                   kDefaultDivergenceThreshold, std::nullopt, 0.0);
  rep.variation.value = static_cast<double>(variation);
  rep.variation.status =
      status_from(model.variation_convergent(), rep.variation.value,
                  kDefaultDivergenceThreshold, std::nullopt, 0.0);
  rep.c1 = verdict_from(rep.variation.status);
  rep.c2 = verdict_from(rep.q.status);
  rep.c3 = verdict_from(rep.sum_abs.status);
  return rep;
}

ChainReport chain_inequalities(const SequenceModel& model) {
  if (!model.finite_support())
    throw std::invalid_argument("chain_inequalities requires finite support");
  if (!model.nonnegative())
    throw std::invalid_argument("chain_inequalities requires non-negative entries");
  const std::int64_t k = model.support_end();
  ChainReport rep;
  rep.monotone = model.nonincreasing();

  long double q = 0.0L;
  for (std::int64_t l = k - 1; l >= 0; --l)
    q += model.tail_norm(l) / std::sqrt(static_cast<double>(l + 1));
  rep.q = static_cast<double>(q);

  long double s = 0.0L, var = 0.0L;
  for (std::int64_t i = k; i >= 1; --i) {
    s += model.value(i);
    var += static_cast<long double>(i) * std::fabs(model.value(i + 1) - model.value(i));
  }
  rep.sum_abs = static_cast<double>(s);
  rep.variation = static_cast<double>(var);

  const double slack = 1e-9 * (1.0 + rep.sum_abs + rep.variation + rep.q);
  // The factor 2 is needed: sum_{l<=n} sqrt(n/l) <= 2n - sqrt(n), not n,
  // and (1,1,1) already has Q = 3.309 > 3 = variation.
  if (rep.q > 2.0 * rep.variation + slack)
    throw consistency_error("chain violated: Q(alpha) > 2 sum k|alpha_k - alpha_{k+1}|");
  if (rep.sum_abs > 4.0 * rep.q + slack)
    throw consistency_error("chain violated: sum alpha_k > 4 Q(alpha)");
  if (rep.monotone && rep.variation > 2.0 * rep.sum_abs + slack)
    throw consistency_error(
        "chain violated: variation > 2 sum alpha_k for non-increasing input");
  return rep;
}

SequenceModel block_embed(const SequenceModel& model, std::span<const long> blocks) {
  if (!model.finite_support())
    throw std::invalid_argument("block_embed requires finite support");
  if (blocks.empty()) throw std::invalid_argument("block_embed: empty block list");
  for (long b : blocks)
    if (b <= 0) throw std::invalid_argument("block_embed: block lengths must be positive");
  const std::int64_t k = model.support_end();
  if (k > static_cast<std::int64_t>(blocks.size()))
    throw std::invalid_argument("block_embed: support exceeds block list length");
  std::int64_t total = 0;
  for (std::int64_t i = 0; i < k; ++i) total += blocks[i];
  std::vector<double> out(static_cast<std::size_t>(total), 0.0);
  std::int64_t pos = 0;
  for (std::int64_t i = 0; i < k; ++i) {
    pos += blocks[i];
    out[pos - 1] = model.value(i + 1);
  }
  return SequenceModel::finite(std::move(out));
}

SequenceModel truncate_window(const SequenceModel& model, std::int64_t first,
                              std::optional<std::int64_t> length) {
  if (first < 1) throw std::invalid_argument("truncate_window requires first >= 1");
  std::int64_t last;
  if (length) {
    last = first + *length;
  } else {
    if (!model.finite_support())
      throw std::invalid_argument("open-ended window needs finite support");
    last = model.support_end();
  }
  std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(last, 0)), 0.0);
  for (std::int64_t k = first; k <= last; ++k)
    out[k - 1] = model.value(k);
  return SequenceModel::finite(std::move(out));
}

SequenceModel prefix(const SequenceModel& model, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("prefix requires n >= 0");
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (std::int64_t k = 1; k <= n; ++k) out[k - 1] = model.value(k);
  return SequenceModel::finite(std::move(out));
}

double tail_bracket(const SequenceModel& model, std::int64_t first,
                    std::int64_t horizon) {
  if (first < 1) throw std::invalid_argument("tail_bracket requires first >= 1");
  long double rest = 0.0L;
  std::int64_t last = horizon;
  if (model.finite_support())
    last = std::min<std::int64_t>(horizon, model.support_end() - 1);
  for (std::int64_t l = last; l >= first; --l)
    rest += model.tail_norm(l) / std::sqrt(static_cast<double>(l + 1));
  const auto tail = model.q_tail_upper(horizon);
  return 2.0 * std::sqrt(static_cast<double>(first)) * model.tail_norm(first - 1) +
         static_cast<double>(rest) + tail.value_or(0.0);
}

std::vector<double> kronecker_residuals(std::span<const double> a,
                                        std::span<const double> psi) {
  if (psi.size() < a.size())
    throw std::invalid_argument("kronecker_residuals: psi shorter than a");
  std::vector<double> r(a.size());
  long double partial = 0.0L;
  double prev = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (psi[n] <= 0.0)
      throw std::invalid_argument("kronecker_residuals: psi must be positive");
    if (psi[n] < prev)
      throw std::invalid_argument("kronecker_residuals: psi must be non-decreasing");
    prev = psi[n];
    partial += a[n];
    r[n] = static_cast<double>(partial) / psi[n];
  }
  return r;
}

SequenceModel load_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sequence file: " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double v;
    if (ls >> v) values.push_back(v);
  }
  return SequenceModel::finite(std::move(values));
}

}  // namespace gstree
