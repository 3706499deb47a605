#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gstree/checks.hpp"
#include "gstree/report.hpp"
#include "gstree/trees.hpp"
#include "gstree/verdict.hpp"

using namespace gstree;

TEST_CASE("boundedness verdicts for the named families on the binary tree") {
  const DegreeProfile binary = DegreeProfile::constant(2);

  const VerdictReport geo = boundedness_verdict(binary, SequenceModel::geometric(0.5));
  CHECK(geo.decision == Decision::bounded);
  CHECK(geo.criterion == CriterionKind::uniform_q);

  const VerdictReport lac = boundedness_verdict(binary, SequenceModel::lacunary_pow2());
  CHECK(lac.decision == Decision::unbounded);

  const VerdictReport even = boundedness_verdict(binary, SequenceModel::even_index());
  CHECK(even.decision == Decision::bounded);

  const VerdictReport harmonic = boundedness_verdict(binary, SequenceModel::power(1.0));
  CHECK(harmonic.decision == Decision::unbounded);
}

TEST_CASE("degree assumption failures are reported, not coerced") {
  const VerdictReport r = boundedness_verdict(DegreeProfile::constant(1),
                                              SequenceModel::geometric(0.5));
  CHECK(r.decision == Decision::undetermined);
  CHECK_FALSE(r.assumption_ok);
  CHECK(!r.notes.empty());
}

TEST_CASE("explicit tree verdict via the general criterion") {
  const TreeSpec tree = build_tq(DegreeProfile::from_list({3, 2, 4}), 3);
  const VerdictReport r = boundedness_verdict(tree, SequenceModel::geometric(0.5), 3);
  CHECK(r.criterion == CriterionKind::general_profile);
  CHECK(r.assumption_ok);
  CHECK(r.decision == Decision::bounded);

  const VerdictReport neg =
      boundedness_verdict(tree, SequenceModel::finite({1.0, -1.0}), 3);
  CHECK(neg.decision == Decision::undetermined);
  CHECK_FALSE(neg.assumption_ok);
}

TEST_CASE("monotone verdict and agreement with the full verdict") {
  CHECK(monotone_verdict(SequenceModel::geometric(0.5)) == Decision::bounded);
  CHECK(monotone_verdict(SequenceModel::power(1.0)) == Decision::unbounded);
  CHECK(monotone_verdict(SequenceModel::finite({0.7})) == Decision::bounded);
  CHECK_THROWS_AS(monotone_verdict(SequenceModel::finite({0.1, 0.9})),
                  std::invalid_argument);

  const DegreeProfile binary = DegreeProfile::constant(2);
  const SequenceModel monotone_fams[] = {
      SequenceModel::geometric(0.5), SequenceModel::geometric(0.9),
      SequenceModel::power(2.0), SequenceModel::power(0.8),
      SequenceModel::constant_prefix(5, 0.3)};
  for (const SequenceModel& m : monotone_fams) {
    CHECK(monotone_verdict(m) == boundedness_verdict(binary, m).decision);
  }
}

TEST_CASE("two-weight verdict is bounded or undetermined only") {
  // alpha grows but the product phi(k) = k^2 4^-k has ratio bounded by 1/2
  const auto ksq = [](std::int64_t k) { return static_cast<double>(k) * k; };
  const auto inv4 = [](std::int64_t k) { return std::pow(0.25, static_cast<double>(k)); };
  CHECK(two_weight_verdict(ksq, inv4) == Decision::bounded);

  const auto zero = [](std::int64_t) { return 0.0; };
  const auto ones = [](std::int64_t) { return 1.0; };
  CHECK(two_weight_verdict(zero, ones) == Decision::bounded);

  const auto slow = [](std::int64_t k) {
    return 1.0 / (std::sqrt(static_cast<double>(k)) * std::log(k + 1.0));
  };
  CHECK(two_weight_verdict(slow, ones) == Decision::undetermined);

  // sigma = 1 agrees with the binary-tree verdict for the geometric family
  const auto geo = [](std::int64_t k) { return std::pow(0.5, static_cast<double>(k)); };
  CHECK(two_weight_verdict(geo, ones) ==
        boundedness_verdict(DegreeProfile::constant(2), SequenceModel::geometric(0.5))
            .decision);
}

TEST_CASE("uniform and weighted criteria agree on bounded-degree profiles") {
  const SequenceModel fams[] = {SequenceModel::geometric(0.5),
                                SequenceModel::power(2.0),
                                SequenceModel::power(0.8),
                                SequenceModel::lacunary_pow2(),
                                SequenceModel::even_index()};
  for (const SequenceModel& m : fams) {
    const Status uniform = q_functional(m, kDefaultHorizon).status;
    for (long q = 2; q <= 5; ++q) {
      const Status weighted =
          q_weighted_functional(DegreeProfile::constant(q), m, kDefaultHorizon)
              .status;
      CHECK(uniform == weighted);
    }
  }
}

TEST_CASE("sandwich experiment flags degenerate reference rows") {
  const std::int64_t depths[] = {1, 2, 3};
  const SandwichTable t = sandwich_experiment(
      DegreeProfile::constant(2), SequenceModel::finite({}), depths, 16, 5);
  for (const SandwichRow& row : t.rows) {
    CHECK(row.skipped);
    CHECK(row.moment_est == 0.0);
  }
}

TEST_CASE("sandwich ratio at depth one matches the closed form") {
  const std::int64_t depths[] = {1};
  const SandwichTable t = sandwich_experiment(
      DegreeProfile::constant(2), SequenceModel::finite({1.0}), depths, 40000, 11);
  const double want =
      std::sqrt(1.0 + 2.0 / std::numbers::pi) / std::sqrt(std::numbers::ln2);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].ratio == doctest::Approx(want).epsilon(0.02));
  CHECK(t.rows[0].ratio_lo <= want + 0.02);
  CHECK(want <= t.rows[0].ratio_hi + 0.02);
  CHECK(t.rows[0].ratio_lo < t.rows[0].ratio);
  CHECK(t.rows[0].ratio < t.rows[0].ratio_hi);
}

TEST_CASE("run stats CSV schema") {
  RunStats s;
  s.depth = {1, 2};
  s.mean = {0.5, 0.25};
  s.second_moment = {0.5, 0.25};
  s.half_width = {0.01, 0.01};
  s.second_half_width = {0.01, 0.01};
  s.replicas = 7;
  const std::string csv = run_stats_csv(s);
  CHECK(csv.rfind("depth,mean,second_moment,half_width,replicas\n", 0) == 0);
  CHECK(csv.find("1,0.5,0.5,0.01,7\n") != std::string::npos);
}

TEST_CASE("atomic writes leave no partial files and rewrite identically") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gstree_report_test";
  fs::remove_all(dir);
  const std::string path = (dir / "stats.csv").string();
  write_file_atomic(path, "hello\n");
  CHECK(fs::exists(path));
  CHECK_FALSE(fs::exists(path + ".tmp"));
  write_file_atomic(path, "hello\n");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "hello\n");
  fs::remove_all(dir);
}

TEST_CASE("manifest embeds the config for round-tripping") {
  const std::string manifest = manifest_json("{\"depth\":4}", 99, "2026-01-01T00:00:00Z");
  CHECK(manifest.find("\"depth\": 4") != std::string::npos);
  CHECK(manifest.find("\"seed\": 99") != std::string::npos);
}

TEST_CASE("field dump layout") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "gstree_field_test.bin";
  const std::vector<double> values{1.0, -2.5, 3.25};
  write_field_dump(path.string(), values);
  std::ifstream in(path, std::ios::binary);
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), 8);
  CHECK(count == 3);
  double v = 0.0;
  in.read(reinterpret_cast<char*>(&v), 8);
  CHECK(v == 1.0);
  in.read(reinterpret_cast<char*>(&v), 8);
  CHECK(v == -2.5);
  fs::remove(path);
}

TEST_CASE("identity battery passes clean and fails under injected fault") {
  const auto clean = run_identity_checks();
  CHECK(clean.size() >= 6 * 6);
  for (const CheckResult& r : clean) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }

  CheckOptions fault;
  fault.parseval_perturbation = 1e-6;
  int parseval_failures = 0;
  for (const CheckResult& r : run_identity_checks(fault))
    if (!r.pass && r.name.rfind("parseval/", 0) == 0) ++parseval_failures;
  CHECK(parseval_failures == static_cast<int>(builtin_finite_families().size()));
}
