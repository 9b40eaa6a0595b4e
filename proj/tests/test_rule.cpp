#include <doctest.h>

#include <random>

#include "pld/errors.hpp"
#include "pld/rule.hpp"
#include "test_util.hpp"

using namespace pld;

TEST_CASE("rule stats on D1") {
  Dataset d1 = testutil::make_d1();
  PredicateId A = 0, B = 1, R = 2;

  auto base = rule_stats(d1, {{}, R});
  CHECK(base.support == 8);
  CHECK(base.co_support == 4);
  CHECK(base.probability == doctest::Approx(0.5));

  auto a_r = rule_stats(d1, {{A}, R});
  CHECK(a_r.support == 4);
  CHECK(a_r.co_support == 3);
  CHECK(a_r.probability == doctest::Approx(0.75));

  auto ab_r = rule_stats(d1, {{A, B}, R});
  CHECK(ab_r.support == 2);
  CHECK(ab_r.co_support == 2);
  CHECK(ab_r.probability == doctest::Approx(1.0));

  CHECK_THROWS_AS(rule_stats(d1, {{A}, 42}), std::invalid_argument);
}

TEST_CASE("wilson lower bound") {
  CHECK(wilson_lower_bound(0, 0, 0.95) == 0.0);
  CHECK(wilson_lower_bound(2, 2, 0.95) == doctest::Approx(0.342).epsilon(0.005));
  for (std::size_t n : {1u, 2u, 5u, 100u, 100000u})
    CHECK(wilson_lower_bound(n, n, 0.99) < 1.0);
  CHECK_THROWS_AS(wilson_lower_bound(1, 2, 0.0), ConfigError);
  CHECK_THROWS_AS(wilson_lower_bound(1, 2, 1.0), ConfigError);
  CHECK_THROWS_AS(wilson_lower_bound(3, 2, 0.95), std::invalid_argument);
}

TEST_CASE("law condition") {
  CHECK(law_condition(0.75, {0.5}));
  CHECK(law_condition(1.0, {0.5, 0.75, 0.75}));
  CHECK_FALSE(law_condition(0.5, {0.5}));  // ties are not laws
  CHECK_FALSE(law_condition(0.0, {}));     // non-zero probability required
  CHECK(law_condition(0.1, {}));

  // Antitone in subrule probabilities: raising one never flips false->true.
  CHECK(law_condition(0.8, {0.5, 0.6}));
  CHECK_FALSE(law_condition(0.8, {0.5, 0.9}));
}

TEST_CASE("significance check") {
  // Single-object probability-1 rule fails min_support 2.
  RuleStats single{1, 1, 1.0, wilson_lower_bound(1, 1, 0.95)};
  CHECK_FALSE(significance_check(single, {2, 0.5, 0.0}));
  CHECK(significance_check(single, {1, 0.5, 0.0}));  // Wilson gate disabled

  // A,B -> R on D1 at a = 0.95: n = 2, lb ~ 0.342 vs baseline 0.5.
  Dataset d1 = testutil::make_d1();
  auto ab_r = rule_stats(d1, {{0, 1}, 2});
  CHECK(ab_r.wilson_lb == doctest::Approx(0.342).epsilon(0.005));
  CHECK_FALSE(significance_check(ab_r, {1, 0.5, 0.95}));

  // Full-support rule above the baseline with large n passes.
  RuleStats big{100000, 90000, 0.9, wilson_lower_bound(90000, 100000, 0.95)};
  CHECK(significance_check(big, {2, 0.5, 0.95}));
}

TEST_CASE("scope equivalence and monotone support on random datasets") {
  std::mt19937 rng(7);
  for (int round = 0; round < 50; ++round) {
    Dataset ds = testutil::random_dataset(rng, 6, 40);
    std::uniform_int_distribution<int> pick(0, 5);
    PredicateId conclusion = pick(rng);
    std::vector<PredicateId> premise;
    for (PredicateId p = 0; p < 6; ++p)
      if (p != conclusion && pick(rng) < 3) premise.push_back(p);

    Rule r{premise, conclusion};
    auto direct = rule_stats(ds, r);

    if (!premise.empty()) {
      // Scope from a random proper sub-premise.
      std::vector<PredicateId> sub = premise;
      sub.erase(sub.begin() + pick(rng) % static_cast<int>(sub.size()));
      auto scope = premise_objects(ds, sub);
      auto scoped = rule_stats(ds, r, &scope);
      CHECK(direct == scoped);

      // Monotone support under premise inclusion.
      auto sub_stats = rule_stats(ds, Rule{sub, conclusion});
      CHECK(direct.support <= sub_stats.support);
      CHECK(direct.co_support <= sub_stats.co_support);
    }
    CHECK(direct.co_support <= direct.support);
    CHECK(direct.support <= ds.n_objects);
    CHECK(direct.wilson_lb <= direct.probability + 1e-12);
  }
}

TEST_CASE("refinement contract") {
  Rule a_r{{0}, 2};
  Rule ab_r = refine(a_r, 1);
  CHECK(ab_r.premise == std::vector<PredicateId>{0, 1});
  CHECK_THROWS_AS(refine(a_r, 0), std::invalid_argument);
  CHECK_THROWS_AS(refine(a_r, 2), std::invalid_argument);
  Rule from_root = refine(Rule{{}, 2}, 0);
  CHECK(from_root.premise == std::vector<PredicateId>{0});
}
