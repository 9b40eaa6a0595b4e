#include <doctest.h>

#include <random>

#include "pld/oracle.hpp"
#include "pld/rule.hpp"
#include "test_util.hpp"

using namespace pld;

TEST_CASE("oracle on D1") {
  Dataset d1 = testutil::make_d1();
  auto laws = enumerate_all_laws(d1, 2, 2);
  auto keys = testutil::law_keys(laws);
  REQUIRE(keys.size() == 4);
  CHECK(keys.count({{}, 2}));
  CHECK(keys.count({{0}, 2}));
  CHECK(keys.count({{1}, 2}));
  CHECK(keys.count({{0, 1}, 2}));
  for (const auto& law : laws) {
    if (law.rule.premise.empty()) CHECK(law.stats.probability == 0.5);
    if (law.rule.premise == std::vector<PredicateId>{0, 1})
      CHECK(law.stats.probability == 1.0);
  }
}

TEST_CASE("oracle degenerate cases") {
  // Conclusion never holds: nothing qualifies, not even the baseline.
  Dataset ds = testutil::dataset_from_rows(
      {"a", "r"}, {{1, 0}, {0, 0}, {1, 0}});
  CHECK(enumerate_all_laws(ds, 1, 2).empty());

  // s = 0 keeps only the baseline, and only when its probability is non-zero.
  Dataset d1 = testutil::make_d1();
  auto base_only = enumerate_all_laws(d1, 2, 0);
  REQUIRE(base_only.size() == 1);
  CHECK(base_only[0].rule.premise.empty());
}

TEST_CASE("oracle refuses large languages") {
  std::mt19937 rng(1);
  Dataset big = testutil::random_dataset(rng, 18, 8);
  CHECK_THROWS_AS(enumerate_all_laws(big, 0, 2), std::invalid_argument);
}

TEST_CASE("oracle laws are downward witnessed") {
  std::mt19937 rng(21);
  for (int round = 0; round < 25; ++round) {
    Dataset ds = testutil::random_dataset(rng, 7, 48);
    for (PredicateId conclusion = 0; conclusion < 7; ++conclusion) {
      for (const auto& law : enumerate_all_laws(ds, conclusion, 4)) {
        for (std::size_t i = 0; i < law.rule.premise.size(); ++i) {
          auto sub = law.rule.premise;
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
          auto sub_stats = rule_stats(ds, Rule{sub, conclusion});
          CHECK(sub_stats.probability < law.stats.probability);
        }
      }
    }
  }
}
