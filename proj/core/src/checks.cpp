#include "gstree/checks.hpp"

#include <cmath>
#include <sstream>

#include "gstree/cantor.hpp"
#include "gstree/errors.hpp"
#include "gstree/trees.hpp"

namespace gstree {
namespace {

CheckResult make_result(const std::string& check, const std::string& family,
                        double error, double tol, const std::string& detail) {
  CheckResult r;
  r.name = check + "/" + family;
  r.error = error;
  r.pass = error <= tol;
  r.detail = detail;
  return r;
}

double rel_err(double got, double want) {
  return std::fabs(got - want) / (1.0 + std::fabs(want));
}

}  // namespace

std::vector<std::pair<std::string, SequenceModel>> builtin_finite_families() {
  std::vector<std::pair<std::string, SequenceModel>> fams;
  fams.emplace_back("spike", SequenceModel::finite({1.0}));
  fams.emplace_back("plateau3", SequenceModel::constant_prefix(3, 1.0));
  {
    std::vector<double> v;
    for (int k = 1; k <= 20; ++k) v.push_back(std::ldexp(1.0, -k));
    fams.emplace_back("geometric-prefix", SequenceModel::finite(std::move(v)));
  }
  {
    std::vector<double> v;
    for (int k = 1; k <= 16; ++k) v.push_back(1.0 / (static_cast<double>(k) * k));
    fams.emplace_back("power-prefix", SequenceModel::finite(std::move(v)));
  }
  {
    std::vector<double> v(16, 0.0);
    for (int n = 1; n <= 4; ++n)
      v[(1u << n) - 1] = 1.0 / (static_cast<double>(n) * n);
    fams.emplace_back("lacunary-prefix", SequenceModel::finite(std::move(v)));
  }
  {
    std::vector<double> v(16, 0.0);
    for (int n = 1; n <= 8; ++n)
      v[2 * n - 1] = 1.0 / (static_cast<double>(n) * n);
    fams.emplace_back("even-prefix", SequenceModel::finite(std::move(v)));
  }
  fams.emplace_back("mixed", SequenceModel::finite({0.3, 0.7, 0.1, 0.5, 0.2}));
  return fams;
}

std::vector<CheckResult> run_identity_checks(const CheckOptions& options) {
  std::vector<CheckResult> out;
  const double tol = options.tol;

  for (const auto& [family, model] : builtin_finite_families()) {
    const long k_support = model.support_end();
    const long k_walsh = std::min<long>(k_support + 2, 20);

    {
      ParsevalCheck p = parseval_check(model, k_walsh);
      const double err =
          std::fabs(p.lhs + options.parseval_perturbation - p.rhs) /
          (1.0 + std::fabs(p.rhs));
      std::ostringstream d;
      d << "walsh=" << p.lhs << " direct=" << p.rhs;
      out.push_back(make_result("parseval", family, err, tol, d.str()));
    }

    {
      double worst = 0.0;
      const SignPoint id = SignPoint::identity(k_walsh);
      const std::uint64_t masks[] = {0u, (1ull << k_walsh) - 1, 1u, 0b1010101u,
                                     (1ull << (k_walsh - 1))};
      for (std::uint64_t m : masks) {
        const SignPoint eta = SignPoint::from_mask(k_walsh, m);
        const CovarianceCheck c = walsh_covariance_check(model, id, eta, k_walsh);
        worst = std::max(worst, c.diff / (1.0 + std::fabs(c.kernel_side)));
      }
      out.push_back(make_result("walsh-covariance", family, worst, tol,
                                "max over identity-vs-mask pairs"));
    }

    {
      // Block layout (2,3,1,2,...) cycled to cover the support.
      const long pattern[] = {2, 3, 1, 2};
      std::vector<long> blocks;
      for (long k = 0; k < k_support; ++k) blocks.push_back(pattern[k % 4]);
      if (blocks.empty()) blocks.push_back(1);
      const SequenceModel embedded = block_embed(model, blocks);
      double worst = 0.0;
      long lambda = 0;
      for (long k = 0; k < static_cast<long>(blocks.size()); ++k) {
        for (long l = lambda; l < lambda + blocks[k]; ++l)
          worst = std::max(worst,
                           rel_err(embedded.tail_norm(l), model.tail_norm(k)));
        lambda += blocks[k];
      }
      worst = std::max(worst, rel_err(embedded.tail_norm(lambda), 0.0));
      out.push_back(make_result("block-identity", family, worst, tol,
                                "Q_l of the embedding vs Q_k per block"));
    }

    {
      double worst = 0.0;
      for (long q : {2L, 3L, 7L}) {
        const std::int64_t horizon = k_support + 4;
        const double weighted =
            q_weighted_functional(DegreeProfile::constant(q), model, horizon).value;
        const double plain =
            std::sqrt(std::log(static_cast<double>(q))) *
            q_functional(model, horizon).value;
        worst = std::max(worst, rel_err(weighted, plain));
      }
      out.push_back(make_result("homogeneous-identity", family, worst, tol,
                                "constant-q weighted sum vs sqrt(log q) scaling"));
    }

    {
      bool pass = true;
      std::string detail = "Q <= 2 variation, sum <= 4Q, monotone variation bound";
      try {
        chain_inequalities(model);
      } catch (const consistency_error& e) {
        pass = false;
        detail = e.what();
      }
      CheckResult r;
      r.name = std::string("inequality-chain/") + family;
      r.pass = pass;
      r.detail = detail;
      out.push_back(std::move(r));
    }

    {
      double worst = 0.0;
      for (long n = 1; n <= k_support + 2; ++n) {
        long double partial = 0.0L;
        for (long l = 0; l < n; ++l) partial += model.tail_norm(l);
        const double lhs =
            std::sqrt(static_cast<double>(n)) * model.tail_norm(n - 1);
        const double rhs =
            static_cast<double>(partial) / std::sqrt(static_cast<double>(n));
        worst = std::max(worst, (lhs - rhs) / (1.0 + std::fabs(rhs)));
      }
      out.push_back(make_result("sqrtn-tail-bound", family, std::max(0.0, worst),
                                tol, "sqrt(N) Q_{N-1} vs mean of Q_l over l < N"));
    }
  }
  return out;
}

}  // namespace gstree
