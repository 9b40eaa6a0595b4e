#pragma once

#include "pld/learner.hpp"

namespace pld {

struct FeatureCluster {
  std::vector<PredicateId> features;  // sorted
  double agreement = 0.0;
  std::vector<Law> characteristic_set;  // laws fully contained in features
};

struct ObjectAssignment {
  std::size_t object = 0;
  int cluster = -1;  // -1 when unassigned (no clusters exist)
  double score = 0.0;
};

struct ClusterHierarchy {
  std::vector<FeatureCluster> clusters;
  std::vector<ObjectAssignment> assignments;
  std::vector<std::pair<int, int>> order;  // (i, j): features_i strictly
                                           // included in features_j
  double epsilon = 0.0;
};

/// Signed agreement of a feature set F: +p for laws fully inside F, -p for
/// laws whose premise is inside F but conclusion is not.
double agreement(const std::vector<Law>& laws,
                 const std::vector<PredicateId>& feature_set);

std::vector<Law> characteristic_set(const std::vector<Law>& laws,
                                    const std::vector<PredicateId>& feature_set);

/// Steepest-ascent local maxima of the agreement measure, seeded from every
/// singleton and every law's premise-plus-conclusion set. Each returned
/// cluster is verified against all single add/remove moves.
std::vector<FeatureCluster> find_feature_clusters(
    const std::vector<Law>& laws, const PredicateLanguage& language);

/// Assigns every object to its argmax-score cluster; the score of object o
/// against cluster C is the agreement of o's feature set over C's
/// characteristic set. Epsilon is the score-band width used when reporting
/// similar members.
ClusterHierarchy assign_objects(std::vector<FeatureCluster> clusters,
                                const Dataset& ds, double epsilon);

std::vector<Law> all_model_laws(const Model& m);

}  // namespace pld
