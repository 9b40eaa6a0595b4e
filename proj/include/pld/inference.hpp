#pragma once

#include "pld/learner.hpp"

namespace pld {

/// The set of predicates true for one object, under the model's language.
struct ObjectFeatures {
  std::vector<PredicateId> predicates;  // sorted, unique

  bool contains(PredicateId p) const;
};

ObjectFeatures features_of(const Dataset& ds, std::size_t object);

/// Laws whose premise is a subset of the object's features, optionally
/// restricted to one conclusion. Empty-premise laws always apply.
std::vector<const Law*> applicable_laws(
    const Model& m, const ObjectFeatures& obj,
    std::optional<PredicateId> target = std::nullopt);

struct Prediction {
  PredicateId label = 0;
  double probability = 0.0;
  std::vector<const Law*> support_laws;
};

struct ClassifyResult {
  bool ok = false;
  Prediction prediction;
  std::vector<const Law*> conflicting;  // tied laws on failure
  bool baseline_fallback = false;
};

/// Picks the maximal-probability applicable law among the class predictors.
/// With strict_ties, any tie between several laws fails; otherwise ties
/// agreeing on one conclusion succeed. Falls back to the baselines when no
/// non-baseline law applies.
ClassifyResult classify(const Model& m, const ObjectFeatures& obj,
                        const std::vector<PredicateId>& class_predictors,
                        bool strict_ties = false);

struct RegressResult {
  bool ok = false;
  double value = 0.0;
  std::vector<const Law*> support_laws;
};

/// Probability-weighted mean of the range midpoints of applicable
/// non-baseline laws whose conclusions are range predictors.
RegressResult regress_average(const Model& m, const ObjectFeatures& obj,
                              const std::vector<PredicateId>& range_predictors,
                              bool weighted = true);

struct AnomalyResult {
  double score = 0.0;  // violated / applicable, 0 when nothing applies
  std::size_t applicable = 0;
  std::size_t violated = 0;
};

/// Scores a full record (feature and conclusion truth values included)
/// against the laws with probability >= p_min.
AnomalyResult anomaly_score(const Model& m, const ObjectFeatures& record,
                            double p_min);

}  // namespace pld
