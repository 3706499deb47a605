#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gstree/errors.hpp"
#include "gstree/trees.hpp"

using namespace gstree;

TEST_CASE("dyadic bounds floor and ceil") {
  const DegreeProfile p = DegreeProfile::from_list({3, 5, 2});
  const DyadicBounds b = dyadic_bounds(p, 3);
  CHECK(b.lower == std::vector<long>{1, 2, 1});
  CHECK(b.upper == std::vector<long>{2, 3, 1});

  const DyadicBounds four = dyadic_bounds(DegreeProfile::constant(4), 3);
  CHECK(four.lower == std::vector<long>{2, 2, 2});
  CHECK(four.upper == four.lower);

  for (std::size_t i = 0; i < b.lower.size(); ++i) {
    const long q = p.degree(static_cast<std::int64_t>(i) + 1);
    CHECK((1L << b.lower[i]) <= q);
    CHECK(q <= (1L << b.upper[i]));
    CHECK(b.upper[i] - b.lower[i] <= 1);
  }
  CHECK_THROWS_AS(dyadic_bounds(DegreeProfile::constant(1), 1),
                  std::invalid_argument);
}

TEST_CASE("pow2 profile") {
  CHECK(pow2_profile(std::vector<long>{1, 1}).list() == std::vector<long>{2, 2});
  CHECK(pow2_profile(std::vector<long>{2, 3}).list() == std::vector<long>{4, 8});
  CHECK_THROWS_AS(pow2_profile(std::vector<long>{0}), std::invalid_argument);
}

TEST_CASE("weighted criterion on constant profiles is a scaled Q") {
  const SequenceModel spike = SequenceModel::finite({1.0});
  const double v =
      q_weighted_functional(DegreeProfile::constant(2), spike, 10).value;
  CHECK(v == doctest::Approx(std::sqrt(std::numbers::ln2)).epsilon(1e-12));

  const SequenceModel geo = SequenceModel::geometric(0.5);
  const double v2 = q_weighted_functional(DegreeProfile::constant(2), geo, 500).value;
  const double v4 = q_weighted_functional(DegreeProfile::constant(4), geo, 500).value;
  CHECK(v4 / v2 == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));

  CHECK(q_weighted_functional(DegreeProfile::constant(2),
                              SequenceModel::lacunary_pow2(), kDefaultHorizon)
            .status == Status::diverged);
  CHECK(q_weighted_functional(DegreeProfile::constant(2),
                              SequenceModel::even_index(), kDefaultHorizon)
            .status == Status::converged);
}

TEST_CASE("general criterion reduces to the weighted one on constant profiles") {
  const SequenceModel geo = SequenceModel::geometric(0.5);
  const std::vector<long> q(64, 3);
  const GeneralCriterionResult g = general_tree_criterion(q, q, geo, 63);
  const double w =
      q_weighted_functional(DegreeProfile::constant(3), geo, 63).value;
  CHECK(g.value == doctest::Approx(w).epsilon(1e-12));
  CHECK(g.assumption_ok);
  CHECK(g.max_log_ratio == doctest::Approx(1.0));
}

TEST_CASE("general criterion flags unbounded log ratio") {
  std::vector<long> dmax, dmin;
  for (int n = 1; n <= 5; ++n) {
    dmax.push_back(1L << (1 << n));  // 2^(2^n)
    dmin.push_back(2);
  }
  const GeneralCriterionResult g =
      general_tree_criterion(dmax, dmin, SequenceModel::geometric(0.5), 4, 8.0);
  CHECK_FALSE(g.assumption_ok);
  CHECK(g.status == Status::undetermined);

  const std::vector<long> four(5, 4), two(5, 2);
  CHECK(general_tree_criterion(four, two, SequenceModel::geometric(0.5), 4)
            .assumption_ok);
}

TEST_CASE("explicit tree construction and serialization") {
  const TreeSpec binary = build_tq(DegreeProfile::constant(2), 3);
  CHECK(binary.depth() == 3);
  CHECK(binary.width(0) == 1);
  CHECK(binary.width(3) == 8);
  CHECK(binary.dmin(0) == 2);
  CHECK(binary.dmax(2) == 2);

  const TreeSpec mixed = build_tq(DegreeProfile::from_list({3, 2}), 2);
  CHECK(mixed.width(1) == 3);
  CHECK(mixed.width(2) == 6);

  std::istringstream in(mixed.serialize());
  const TreeSpec reparsed = TreeSpec::parse(in);
  CHECK(reparsed.serialize() == mixed.serialize());

  CHECK(build_tq(DegreeProfile::constant(2), 0).depth() == 0);
  CHECK_THROWS_AS(build_tq(DegreeProfile::constant(2), 40), resource_error);
}

TEST_CASE("tree spec rejects malformed input") {
  CHECK_THROWS_AS(TreeSpec({{0, 0}, {1, 1}}), std::invalid_argument);  // leaf at 0
  CHECK_THROWS_AS(TreeSpec({{0, 0}, {1, 0}}), std::invalid_argument);  // unsorted
  CHECK_THROWS_AS(TreeSpec(std::vector<std::vector<long>>{{2}}),
                  std::invalid_argument);  // bad parent
}

TEST_CASE("boundary distance") {
  const TreeSpec t = build_tq(DegreeProfile::constant(2), 4);
  const RayPrefix a{&t, {0, 0, 0, 0}};
  const RayPrefix b{&t, {0, 0, 0, 1}};
  const RayPrefix c{&t, {1, 2, 4, 8}};
  CHECK(boundary_distance(a, a) == 0.0);
  CHECK(boundary_distance(a, b) == doctest::Approx(std::ldexp(1.0, -3)));
  CHECK(boundary_distance(a, c) == 1.0);

  const TreeSpec other = build_tq(DegreeProfile::constant(2), 4);
  const RayPrefix foreign{&other, {0, 0, 0, 0}};
  CHECK_THROWS_AS(boundary_distance(a, foreign), std::invalid_argument);
}

TEST_CASE("profile embeddings preserve structure") {
  const DegreeProfile sub = DegreeProfile::constant(2);
  const DegreeProfile super = DegreeProfile::constant(3);
  const int depth = 6;
  const EmbeddingPlan plan = embed_profiles(sub, super, depth);
  for (int n = 1; n <= depth; ++n) {
    const auto& cur = plan.map[n];
    const auto& prev = plan.map[n - 1];
    std::set<std::int64_t> seen(cur.begin(), cur.end());
    CHECK(seen.size() == cur.size());  // injective
    for (std::size_t i = 0; i < cur.size(); ++i)
      CHECK(cur[i] / 3 == prev[i / 2]);  // parent-preserving
  }

  const EmbeddingPlan identity = embed_profiles(sub, sub, 4);
  for (std::size_t n = 0; n < identity.map.size(); ++n)
    for (std::size_t i = 0; i < identity.map[n].size(); ++i)
      CHECK(identity.map[n][i] == static_cast<std::int64_t>(i));

  CHECK_THROWS_AS(embed_profiles(super, sub, 2), std::invalid_argument);
}

TEST_CASE("dyadic sandwich embeddings compose for (3,5,2)") {
  const DegreeProfile q = DegreeProfile::from_list({3, 5, 2});
  const DyadicBounds b = dyadic_bounds(q, 3);
  const DegreeProfile lower = pow2_profile(b.lower);
  const DegreeProfile upper = pow2_profile(b.upper);
  const EmbeddingPlan first = embed_profiles(lower, q, 3);
  const EmbeddingPlan second = embed_profiles(q, upper, 3);
  const EmbeddingPlan direct = embed_profiles(lower, upper, 3);
  // Composition stays injective and parent-preserving even if it differs
  // from the direct plan vertex by vertex.
  for (int n = 1; n <= 3; ++n) {
    std::set<std::int64_t> seen;
    for (std::int64_t v : first.map[n]) {
      const std::int64_t image = second.map[n][v];
      CHECK(seen.insert(image).second);
    }
    CHECK(direct.map[n].size() == first.map[n].size());
  }
}
