#include "gstree/cantor.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "gstree/errors.hpp"
#include "gstree/rng.hpp"

namespace gstree {
namespace {

void require_support(const SequenceModel& model, long max_index,
                     const char* who) {
  if (!model.finite_support() || model.support_end() > max_index)
    throw std::invalid_argument(std::string(who) +
                                ": support must be finite and <= K");
}

// b[m] = sum_{k >= m} 2^-k alpha_k^2 for m = 1..K+1.
std::vector<long double> halved_suffix(const SequenceModel& model, long k_max) {
  std::vector<long double> b(static_cast<std::size_t>(k_max) + 2, 0.0L);
  for (long k = k_max; k >= 1; --k) {
    const long double a = model.value(k);
    b[k] = b[k + 1] + ldexpl(a * a, -static_cast<int>(k));
  }
  return b;
}

double block_integral(long l) {
  // int_{2^-l-1}^{2^-l} dt / (t sqrt(log(4/t)))
  const double log2c = std::numbers::ln2;
  return 2.0 * std::sqrt(log2c) /
         (std::sqrt(static_cast<double>(l) + 3.0) + std::sqrt(static_cast<double>(l) + 2.0));
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb,
                        double whole, double eps, int depth,
                        const std::function<double(double)>& f) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(a, m, fa, flm, fm, left, eps / 2.0, depth - 1, f) +
         adaptive_simpson(m, b, fm, frm, fb, right, eps / 2.0, depth - 1, f);
}

double integrate(double a, double b, double eps,
                 const std::function<double(double)>& f) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(a, b, fa, fm, fb, whole, eps, 40, f);
}

}  // namespace

double walsh_coefficient(const SequenceModel& model, long m) {
  if (m < 0) throw std::invalid_argument("walsh_coefficient: m >= 0 required");
  if (!model.finite_support())
    throw std::invalid_argument("walsh_coefficient requires finite support");
  const long k_max = model.support_end();
  long double sum = 0.0L;
  for (long k = k_max; k >= std::max<long>(m, 1); --k) {
    const long double a = model.value(k);
    sum += ldexpl(a * a, -static_cast<int>(k));
  }
  return std::sqrt(static_cast<double>(sum));
}

WalshTable walsh_table(const SequenceModel& model, long max_index) {
  require_support(model, max_index, "walsh_table");
  WalshTable t;
  t.max_index = max_index;
  t.a.resize(static_cast<std::size_t>(max_index) + 1);
  t.mult.resize(static_cast<std::size_t>(max_index) + 1);
  const auto b = halved_suffix(model, max_index);
  t.a[0] = std::sqrt(static_cast<double>(b[1]));
  t.mult[0] = 1.0;
  for (long m = 1; m <= max_index; ++m) {
    t.a[m] = std::sqrt(static_cast<double>(b[m]));
    t.mult[m] = std::ldexp(1.0, static_cast<int>(m) - 1);
  }
  return t;
}

ParsevalCheck parseval_check(const SequenceModel& model, long max_index) {
  const WalshTable t = walsh_table(model, max_index);
  ParsevalCheck c;
  long double lhs = 0.0L;
  for (long m = 0; m <= max_index; ++m)
    lhs += static_cast<long double>(t.mult[m]) * t.a[m] * t.a[m];
  c.lhs = static_cast<double>(lhs);
  c.rhs = model.tail_sq(0);
  c.diff = std::fabs(c.lhs - c.rhs);
  return c;
}

SignPoint SignPoint::from_mask(long k, std::uint64_t mask) {
  SignPoint p;
  p.bits.resize(static_cast<std::size_t>(k));
  for (long i = 0; i < k; ++i)
    p.bits[i] = (mask >> i) & 1u ? -1 : 1;
  return p;
}

double covariance_kernel(const SequenceModel& model, const SignPoint& theta,
                         const SignPoint& eta) {
  if (theta.size() != eta.size())
    throw std::invalid_argument("covariance_kernel: length mismatch");
  long agree = 0;
  while (agree < theta.size() && theta.bits[agree] == eta.bits[agree]) ++agree;
  // sum_{k<=agree} alpha_k^2 = tail_sq(0) - tail_sq(agree)
  if (agree == theta.size()) return model.tail_sq(0);
  long double s = 0.0L;
  for (long k = 1; k <= agree; ++k) {
    const long double a = model.value(k);
    s += a * a;
  }
  return static_cast<double>(s);
}

CovarianceCheck walsh_covariance_check(const SequenceModel& model,
                                       const SignPoint& theta, const SignPoint& eta,
                                       long max_index) {
  require_support(model, max_index, "walsh_covariance_check");
  if (theta.size() != max_index || eta.size() != max_index)
    throw std::invalid_argument("walsh_covariance_check: point length != K");
  const WalshTable t = walsh_table(model, max_index);

  // W(m) = sum_{A : m_A = m} (theta eta)_A; for m >= 1 this equals
  // x_m * prod_{i<m} (1 + x_i) with x_i = theta_i eta_i.
  CovarianceCheck c;
  long double sum = t.a[0] * t.a[0];  // W(0) = 1
  double prod = 1.0;
  for (long m = 1; m <= max_index; ++m) {
    const double x = static_cast<double>(theta.bits[m - 1] * eta.bits[m - 1]);
    sum += static_cast<long double>(t.a[m]) * t.a[m] * x * prod;
    prod *= 1.0 + x;
  }
  c.walsh_side = static_cast<double>(sum);
  c.kernel_side = covariance_kernel(model, theta, eta);
  c.diff = std::fabs(c.walsh_side - c.kernel_side);
  return c;
}

bool psd_check(const SequenceModel& model, std::span<const SignPoint> points,
               double tol, double* min_eigenvalue) {
  if (points.empty()) throw std::invalid_argument("psd_check: need >= 1 point");
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      gram(i, j) = gram(j, i) = covariance_kernel(model, points[i], points[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw precision_error("psd_check: eigensolver failed");
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eigenvalue) *min_eigenvalue = min_eig;
  return min_eig >= -tol;
}

SigmaProfile sigma_profile(const SequenceModel& model) {
  if (!model.finite_support())
    throw std::invalid_argument("sigma_profile requires finite support");
  const long k = static_cast<long>(model.support_end());
  SigmaProfile p;
  p.q.resize(static_cast<std::size_t>(k) + 1);
  for (long l = 0; l <= k; ++l) p.q[l] = model.tail_norm(l);
  return p;
}

double SigmaProfile::rearranged(double t) const {
  if (!(t > 0.0 && t <= 1.0))
    throw std::invalid_argument("rearranged: t must be in (0,1]");
  // block l: 2^-l-1 < t <= 2^-l
  long l = static_cast<long>(std::floor(-std::log2(t)));
  if (t <= std::ldexp(1.0, -static_cast<int>(l) - 1)) ++l;
  return l < static_cast<long>(q.size()) ? q[l] : 0.0;
}

double SigmaProfile::distribution(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("distribution: s must be > 0");
  if (s > q[0]) return 1.0;
  for (std::size_t l = 0; l < q.size(); ++l)
    if (q[l] < s) return std::ldexp(1.0, -static_cast<int>(l));
  return 0.0;  // unreachable for finite support (q.back() == 0 < s)
}

double entropy_integral(const SequenceModel& model, EntropyMethod method) {
  const SigmaProfile p = sigma_profile(model);
  const long blocks = static_cast<long>(p.q.size()) - 1;  // q[blocks] == 0
  if (method == EntropyMethod::blockwise) {
    long double sum = 0.0L;
    for (long l = blocks - 1; l >= 0; --l) sum += p.q[l] * block_integral(l);
    return static_cast<double>(sum);
  }
  long double sum = 0.0L;
  for (long l = 0; l < blocks; ++l) {
    if (p.q[l] == 0.0) continue;
    const double lo = std::ldexp(1.0, -static_cast<int>(l) - 1);
    const double hi = std::ldexp(1.0, -static_cast<int>(l));
    const auto f = [](double t) {
      return 1.0 / (t * std::sqrt(std::log(4.0 / t)));
    };
    sum += p.q[l] * integrate(lo, hi, 1e-12, f);
  }
  return static_cast<double>(sum);
}

void fwht_inplace(std::span<double> data) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fwht_inplace: size must be a power of two");
  for (std::size_t h = 1; h < n; h <<= 1)
    for (std::size_t i = 0; i < n; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = data[j], y = data[j + h];
        data[j] = x + y;
        data[j + h] = x - y;
      }
}

std::vector<double> simulate_walsh_series(const SequenceModel& model, long max_index,
                                          std::uint64_t seed, std::uint64_t call_id,
                                          long max_log2_size) {
  require_support(model, max_index, "simulate_walsh_series");
  if (max_index > max_log2_size)
    throw resource_error("simulate_walsh_series: K exceeds the 2^K memory budget");
  const WalshTable t = walsh_table(model, max_index);
  const std::size_t n = std::size_t{1} << max_index;
  std::vector<double> coeff(n);
  GaussianGen gauss(substream_seed(seed, call_id));
  for (std::size_t mask = 0; mask < n; ++mask) {
    const long m = mask == 0 ? 0 : std::bit_width(mask);
    coeff[mask] = t.a[m] * gauss();
  }
  fwht_inplace(coeff);
  return coeff;
}

}  // namespace gstree
