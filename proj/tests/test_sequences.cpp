#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "gstree/errors.hpp"
#include "gstree/rng.hpp"
#include "gstree/sequence.hpp"

using namespace gstree;

namespace {
constexpr double kZeta4 = std::numbers::pi * std::numbers::pi *
                          std::numbers::pi * std::numbers::pi / 90.0;
}

TEST_CASE("tail norms of the geometric family have the closed form") {
  const SequenceModel m = SequenceModel::geometric(0.5);
  for (int l = 0; l <= 30; ++l) {
    const double want = std::ldexp(1.0, -l) / std::sqrt(3.0);
    CHECK(m.tail_norm(l) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("spike tail norms") {
  const SequenceModel m = SequenceModel::finite({1.0});
  CHECK(m.tail_norm(0) == 1.0);
  CHECK(m.tail_norm(1) == 0.0);
  CHECK(m.tail_norm(7) == 0.0);
}

TEST_CASE("power-4 families hit zeta(4) at l = 0") {
  CHECK(SequenceModel::lacunary_pow2().tail_sq(0) ==
        doctest::Approx(kZeta4).epsilon(1e-13));
  CHECK(SequenceModel::even_index().tail_sq(0) ==
        doctest::Approx(kZeta4).epsilon(1e-13));
  CHECK(SequenceModel::power(2.0).tail_sq(0) ==
        doctest::Approx(kZeta4).epsilon(1e-13));
  // even-index Q_0 = sqrt(zeta(4))
  CHECK(SequenceModel::even_index().tail_norm(0) ==
        doctest::Approx(1.04036).epsilon(1e-5));
}

TEST_CASE("parametric tails match long direct summation") {
  const SequenceModel fams[] = {SequenceModel::power(2.0),
                                SequenceModel::even_index()};
  for (const SequenceModel& m : fams) {
    for (std::int64_t l : {0, 1, 2, 3, 7, 10, 33}) {
      long double direct = 0.0L;
      for (std::int64_t k = 2'000'000; k > l; --k) {
        const long double a = m.value(k);
        direct += a * a;
      }
      CHECK(m.tail_sq(l) ==
            doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
    }
  }

  // Lacunary entries live at k = 2^n, so sum over n directly.
  const SequenceModel lac = SequenceModel::lacunary_pow2();
  for (std::int64_t l : {0, 1, 2, 3, 7, 10, 33}) {
    long double direct = 0.0L;
    for (std::int64_t n = 2'000'000; n >= 1; --n) {
      if ((std::int64_t{1} << std::min<std::int64_t>(n, 62)) <= l) break;
      const long double a = 1.0L / (static_cast<long double>(n) * n);
      direct += a * a;
    }
    CHECK(lac.tail_sq(l) ==
          doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
  }
}

TEST_CASE("tail_sq is non-increasing and consistent with head sums") {
  const SequenceModel m = SequenceModel::finite({0.3, 0.7, 0.1, 0.5, 0.2});
  long double head = 0.0L;
  for (int l = 0; l <= 6; ++l) {
    CHECK(m.tail_sq(l) <= m.tail_sq(std::max(0, l - 1)) + 1e-15);
    CHECK(static_cast<double>(head) + m.tail_sq(l) ==
          doctest::Approx(m.tail_sq(0)).epsilon(1e-12));
    const double a = m.value(l + 1);
    head += static_cast<long double>(a) * a;
  }
}

TEST_CASE("q_functional trivial and named-family verdicts") {
  const SumResult spike = q_functional(SequenceModel::finite({1.0}), 10);
  CHECK(spike.value == doctest::Approx(1.0));
  CHECK(spike.status == Status::converged);

  CHECK(q_functional(SequenceModel::lacunary_pow2(), kDefaultHorizon).status ==
        Status::diverged);
  CHECK(q_functional(SequenceModel::even_index(), kDefaultHorizon).status ==
        Status::converged);
}

TEST_CASE("condition report reproduces the two counterexample rows") {
  const ConditionReport lac =
      condition_report(SequenceModel::lacunary_pow2(), kDefaultHorizon);
  CHECK(lac.c1 == Verdict3::fails);
  CHECK(lac.c2 == Verdict3::fails);
  CHECK(lac.c3 == Verdict3::holds);

  const ConditionReport even =
      condition_report(SequenceModel::even_index(), kDefaultHorizon);
  CHECK(even.c1 == Verdict3::fails);
  CHECK(even.c2 == Verdict3::holds);
  CHECK(even.c3 == Verdict3::holds);

  const ConditionReport geo =
      condition_report(SequenceModel::geometric(0.5), kDefaultHorizon);
  CHECK(geo.c1 == Verdict3::holds);
  CHECK(geo.c2 == Verdict3::holds);
  CHECK(geo.c3 == Verdict3::holds);
}

TEST_CASE("condition report rejects signed sequences") {
  CHECK_THROWS_AS(condition_report(SequenceModel::finite({1.0, -1.0}), 10),
                  std::invalid_argument);
}

TEST_CASE("chain inequalities hold on fixed and random nonneg sequences") {
  const ChainReport spike = chain_inequalities(SequenceModel::finite({1.0}));
  CHECK(spike.q == doctest::Approx(1.0));
  CHECK(spike.sum_abs == doctest::Approx(1.0));
  CHECK(spike.variation == doctest::Approx(1.0));

  std::vector<double> geo;
  for (int k = 0; k < 20; ++k) geo.push_back(std::ldexp(1.0, -k));
  CHECK_NOTHROW(chain_inequalities(SequenceModel::finite(std::move(geo))));

  const ChainReport zero = chain_inequalities(SequenceModel::finite({}));
  CHECK(zero.q == 0.0);
  CHECK(zero.sum_abs == 0.0);
  CHECK(zero.variation == 0.0);

  Xoshiro256pp rng(substream_seed(99, 0));
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng.next() % 24);
    for (double& x : v) x = rng.uniform01();
    CHECK_NOTHROW(chain_inequalities(SequenceModel::finite(std::move(v))));
  }
}

TEST_CASE("block embedding places entries at block partial sums") {
  const SequenceModel m = SequenceModel::finite({3.0, 5.0});
  const long blocks[] = {2, 3};
  const SequenceModel e = block_embed(m, blocks);
  CHECK(e.values() == std::vector<double>{0.0, 3.0, 0.0, 0.0, 5.0});

  const long id_blocks[] = {1, 1};
  CHECK(block_embed(m, id_blocks).values() == m.values());
}

TEST_CASE("block identity for the tail norms") {
  const SequenceModel m = SequenceModel::finite({1.0, 1.0});
  const long blocks[] = {2, 2};
  const SequenceModel e = block_embed(m, blocks);
  CHECK(e.tail_norm(0) == doctest::Approx(std::numbers::sqrt2));
  CHECK(e.tail_norm(1) == doctest::Approx(std::numbers::sqrt2));
  CHECK(e.tail_norm(2) == doctest::Approx(1.0));
  CHECK(e.tail_norm(3) == doctest::Approx(1.0));
  CHECK(e.tail_norm(4) == 0.0);
}

TEST_CASE("window and prefix truncation") {
  const SequenceModel m = SequenceModel::finite({1.0, 2.0, 3.0});
  CHECK(truncate_window(m, 2, 0).values() == std::vector<double>{0.0, 2.0});
  CHECK(prefix(m, 2).values() == std::vector<double>{1.0, 2.0});
  CHECK(prefix(m, 5).values() == m.values());
}

TEST_CASE("tail bracket closed cases and decreasing trend") {
  const SequenceModel spike = SequenceModel::finite({1.0});
  CHECK(tail_bracket(spike, 1, 100) == doctest::Approx(2.0));
  CHECK(tail_bracket(spike, 2, 100) == doctest::Approx(0.0));

  const SequenceModel geo = SequenceModel::geometric(0.5);
  double prev = tail_bracket(geo, 2, kDefaultHorizon);
  for (std::int64_t n = 3; n <= 20; ++n) {
    const double cur = tail_bracket(geo, n, kDefaultHorizon);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("sqrt(N) tail norm bound holds exactly") {
  const SequenceModel fams[] = {SequenceModel::geometric(0.7),
                                SequenceModel::power(1.5),
                                SequenceModel::finite({0.3, 0.7, 0.1, 0.5})};
  for (const SequenceModel& m : fams) {
    long double partial = 0.0L;
    for (std::int64_t n = 1; n <= 64; ++n) {
      partial += m.tail_norm(n - 1);
      const double lhs = std::sqrt(static_cast<double>(n)) * m.tail_norm(n - 1);
      const double rhs =
          static_cast<double>(partial) / std::sqrt(static_cast<double>(n));
      CHECK(lhs <= rhs + 1e-12 * (1.0 + rhs));
    }
  }
}

TEST_CASE("kronecker residuals") {
  std::vector<double> zero(16, 0.0), psi(16);
  for (int n = 0; n < 16; ++n) psi[n] = n + 1.0;
  for (double r : kronecker_residuals(zero, psi)) CHECK(r == 0.0);

  std::vector<double> alt(16);
  for (int n = 0; n < 16; ++n) alt[n] = n % 2 == 0 ? -1.0 : 1.0;
  const auto r = kronecker_residuals(alt, psi);
  for (int n = 0; n < 16; ++n) CHECK(std::fabs(r[n]) <= 1.0 / (n + 1.0) + 1e-15);

  std::vector<double> bad_psi(16, -1.0);
  CHECK_THROWS_AS(kronecker_residuals(alt, bad_psi), std::invalid_argument);
}

TEST_CASE("sequence file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "gstree_seq_test.txt";
  {
    std::ofstream out(path);
    out << "1.5\n\n0.25\n0\n";
  }
  const SequenceModel m = load_sequence_file(path.string());
  // Blank lines are skipped and trailing zeros trimmed.
  CHECK(m.values() == std::vector<double>{1.5, 0.25});
  CHECK(m.value(1) == 1.5);
  CHECK(m.value(2) == 0.25);
  CHECK(m.value(3) == 0.0);
  std::filesystem::remove(path);
}
