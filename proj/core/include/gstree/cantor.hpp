#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gstree/sequence.hpp"

namespace gstree {

// Walsh coefficients a_A depend on A only through m_A = max(A u {0}):
// a(m)^2 = sum_{k >= max(m,1)} 2^(-k) alpha_k^2.  Stored by m with subset
// multiplicities mult(0) = 1, mult(m) = 2^(m-1).
struct WalshTable {
  long max_index = 0;          // K
  std::vector<double> a;       // a[m], m = 0..K
  std::vector<double> mult;    // subset counts by m
};

// Requires finite support <= K.
WalshTable walsh_table(const SequenceModel& model, long max_index);

double walsh_coefficient(const SequenceModel& model, long m);

struct ParsevalCheck {
  double lhs = 0.0;  // sum_m mult(m) a(m)^2
  double rhs = 0.0;  // sum_k alpha_k^2
  double diff = 0.0;
};

ParsevalCheck parseval_check(const SequenceModel& model, long max_index);

// A depth-K point of {-1,+1}^K.
struct SignPoint {
  std::vector<int> bits;  // each +1 or -1

  static SignPoint identity(long k) { return SignPoint{std::vector<int>(k, 1)}; }
  // bit i of mask set -> coordinate i+1 equals -1.
  static SignPoint from_mask(long k, std::uint64_t mask);
  long size() const { return static_cast<long>(bits.size()); }
};

// C_alpha(theta, eta) = sum_{k <= |theta ^ eta|} alpha_k^2 where
// |theta ^ eta| is the length of the common prefix (full length when equal).
double covariance_kernel(const SequenceModel& model, const SignPoint& theta,
                         const SignPoint& eta);

struct CovarianceCheck {
  double walsh_side = 0.0;
  double kernel_side = 0.0;
  double diff = 0.0;
};

// Walsh-side covariance via the product identity
// sum_{A subset {1..k}} (theta eta)_A = prod_{i<=k} (1 + theta_i eta_i).
CovarianceCheck walsh_covariance_check(const SequenceModel& model,
                                       const SignPoint& theta, const SignPoint& eta,
                                       long max_index);

// Smallest eigenvalue of the Gram matrix [C_alpha(theta_i, theta_j)] >= -tol.
bool psd_check(const SequenceModel& model, std::span<const SignPoint> points,
               double tol, double* min_eigenvalue = nullptr);

// Boundary profile sigma(theta) = Q_{|theta ^ identity|}, its distribution
// function under the uniform measure, and its non-decreasing rearrangement.
struct SigmaProfile {
  std::vector<double> q;  // Q_l, l = 0..K (q.back() == 0 for finite support)

  double rearranged(double t) const;    // sigma-bar on (0, 1]
  double distribution(double s) const;  // m_sigma(s), s > 0
};

SigmaProfile sigma_profile(const SequenceModel& model);

enum class EntropyMethod { quadrature, blockwise };

// I(sigma_alpha) = int_0^1 sigma-bar(t) / (t sqrt(log(4/t))) dt.
// blockwise uses the closed-form dyadic block integral
//   int_{2^-l-1}^{2^-l} dt/(t sqrt(log(4/t))) = 2 sqrt(log 2)/(sqrt(l+3)+sqrt(l+2))
// (substitute u = log(4/t)); quadrature integrates each block adaptively.
double entropy_integral(const SequenceModel& model, EntropyMethod method);

// In-place Walsh-Hadamard transform; data.size() must be a power of two.
void fwht_inplace(std::span<double> data);

// X-hat over all 2^K sign points: independent Gaussians per subset of
// {1..K} (in bitmask order, substream (seed, call_id)), scaled by a(m_A)
// and transformed.  Output index s encodes theta via from_mask(K, s).
std::vector<double> simulate_walsh_series(const SequenceModel& model, long max_index,
                                          std::uint64_t seed, std::uint64_t call_id = 0,
                                          long max_log2_size = 24);

}  // namespace gstree
