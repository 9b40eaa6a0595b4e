#include <doctest.h>

#include "pld/cluster.hpp"
#include "pld/inference.hpp"
#include "test_util.hpp"

using namespace pld;

namespace {

Model d1_model() {
  Dataset d1 = testutil::make_d1();
  Hyperparameters hp = testutil::exhaustive_hp(2);
  hp.max_size = 3;
  return learn(d1, {2}, hp).model;
}

}  // namespace

TEST_CASE("agreement measure on D1") {
  auto laws = all_model_laws(d1_model());
  REQUIRE(laws.size() == 4);
  CHECK(agreement(laws, {0, 1, 2}) == doctest::Approx(3.0));
  CHECK(agreement(laws, {0, 1}) == doctest::Approx(-3.0));
  CHECK(agreement(laws, {}) == doctest::Approx(-0.5));
  CHECK(agreement(laws, {0, 2}) == doctest::Approx(1.25));
}

TEST_CASE("agreement decomposes term by term") {
  std::mt19937 rng(9);
  for (int round = 0; round < 20; ++round) {
    Dataset ds = testutil::random_dataset(rng, 6, 32);
    auto model = learn(ds, {0, 1}, testutil::exhaustive_hp(2)).model;
    auto laws = all_model_laws(model);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<PredicateId> fs;
    for (PredicateId p = 0; p < 6; ++p)
      if (coin(rng)) fs.push_back(p);
    std::set<PredicateId> fset(fs.begin(), fs.end());
    double expected = 0.0;
    for (const auto& law : laws) {
      bool premise_in = true;
      for (PredicateId p : law.rule.premise)
        if (!fset.count(p)) premise_in = false;
      if (!premise_in) continue;
      expected += fset.count(law.rule.conclusion) ? law.stats.probability
                                                  : -law.stats.probability;
    }
    CHECK(agreement(laws, fs) == doctest::Approx(expected));
  }
}

TEST_CASE("feature clusters on D1") {
  Model m = d1_model();
  auto laws = all_model_laws(m);
  auto clusters = find_feature_clusters(laws, m.language);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].features == std::vector<PredicateId>{0, 1, 2});
  CHECK(clusters[0].agreement == doctest::Approx(3.0));
  CHECK(clusters[0].characteristic_set.size() == 4);

  // Exhaustive single-move neighbor check.
  for (PredicateId p = 0; p < 3; ++p) {
    std::vector<PredicateId> removed;
    for (PredicateId q : clusters[0].features)
      if (q != p) removed.push_back(q);
    CHECK(agreement(laws, removed) < clusters[0].agreement);
  }

  CHECK(find_feature_clusters({}, m.language).empty());
}

TEST_CASE("clusters are strict local maxima") {
  std::mt19937 rng(4);
  for (int round = 0; round < 15; ++round) {
    Dataset ds = testutil::random_dataset(rng, 6, 48);
    Hyperparameters hp = testutil::exhaustive_hp(2);
    auto m = learn(ds, {1, 4}, hp).model;
    auto laws = all_model_laws(m);
    auto clusters = find_feature_clusters(laws, m.language);

    std::set<std::vector<PredicateId>> feature_sets;
    for (const auto& c : clusters) {
      CHECK(feature_sets.insert(c.features).second);  // deduplicated
      CHECK(agreement(laws, c.features) == doctest::Approx(c.agreement));
      // Every single add/remove move strictly decreases the agreement.
      std::set<PredicateId> fs(c.features.begin(), c.features.end());
      for (const auto& p : m.language.predicates) {
        std::set<PredicateId> neighbor = fs;
        if (fs.count(p.id))
          neighbor.erase(p.id);
        else
          neighbor.insert(p.id);
        std::vector<PredicateId> nv(neighbor.begin(), neighbor.end());
        CHECK(agreement(laws, nv) < c.agreement);
      }
    }
  }
}

TEST_CASE("characteristic sets") {
  auto laws = all_model_laws(d1_model());
  CHECK(characteristic_set(laws, {0, 1, 2}).size() == 4);
  auto partial = characteristic_set(laws, {0, 2});
  REQUIRE(partial.size() == 2);  // baseline and A->R
  CHECK(characteristic_set(laws, {}).empty());
}

TEST_CASE("object assignment") {
  Dataset d1 = testutil::make_d1();
  Model m = d1_model();
  auto clusters = find_feature_clusters(all_model_laws(m), m.language);
  auto hierarchy = assign_objects(clusters, d1, 0.1);
  REQUIRE(hierarchy.assignments.size() == 8);

  // o1 has the full feature set {A,B,R}: score 3.0.
  CHECK(hierarchy.assignments[0].cluster == 0);
  CHECK(hierarchy.assignments[0].score == doctest::Approx(3.0));
  // o7 has no features: only the baseline premise applies, conclusion
  // outside the feature set.
  CHECK(hierarchy.assignments[6].score == doctest::Approx(-0.5));
  CHECK(hierarchy.assignments[6].cluster == 0);  // argmax over one cluster

  // No clusters: everything unassigned.
  auto empty = assign_objects({}, d1, 0.1);
  for (const auto& a : empty.assignments) CHECK(a.cluster == -1);
}

TEST_CASE("hierarchy order is strict inclusion") {
  FeatureCluster small{{0, 1}, 1.0, {}};
  FeatureCluster big{{0, 1, 2}, 2.0, {}};
  FeatureCluster other{{3}, 0.5, {}};
  Dataset d1 = testutil::make_d1();
  auto h = assign_objects({small, big, other}, d1, 0.1);
  REQUIRE(h.order.size() == 1);
  CHECK(h.order[0] == std::pair<int, int>{0, 1});
}
