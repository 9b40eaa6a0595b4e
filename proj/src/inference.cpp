#include "pld/inference.hpp"

#include <algorithm>
#include <stdexcept>

#include "pld/errors.hpp"

namespace pld {

bool ObjectFeatures::contains(PredicateId p) const {
  return std::binary_search(predicates.begin(), predicates.end(), p);
}

ObjectFeatures features_of(const Dataset& ds, std::size_t object) {
  if (object >= ds.n_objects)
    throw std::invalid_argument("object index out of range");
  ObjectFeatures f;
  for (std::size_t p = 0; p < ds.columns.size(); ++p)
    if (ds.columns[p].test(object))
      f.predicates.push_back(static_cast<PredicateId>(p));
  return f;
}

namespace {

void check_features(const Model& m, const ObjectFeatures& obj) {
  for (PredicateId p : obj.predicates)
    if (p < 0 || static_cast<std::size_t>(p) >= m.language.size())
      throw std::invalid_argument("unknown predicate id: " + std::to_string(p));
}

bool premise_applies(const Law& law, const ObjectFeatures& obj) {
  for (PredicateId p : law.rule.premise)
    if (!obj.contains(p)) return false;
  return true;
}

}  // namespace

std::vector<const Law*> applicable_laws(const Model& m,
                                        const ObjectFeatures& obj,
                                        std::optional<PredicateId> target) {
  check_features(m, obj);
  std::vector<const Law*> out;
  for (const auto& cm : m.conclusions) {
    if (target && cm.conclusion != *target) continue;
    for (const auto& law : cm.laws)
      if (premise_applies(law, obj)) out.push_back(&law);
  }
  return out;
}

ClassifyResult classify(const Model& m, const ObjectFeatures& obj,
                        const std::vector<PredicateId>& class_predictors,
                        bool strict_ties) {
  check_features(m, obj);
  if (class_predictors.empty())
    throw std::invalid_argument("class predictors must be non-empty");
  for (PredicateId pred : class_predictors)
    if (!m.find(pred))
      throw ConfigError("no baseline rule for class predictor " +
                        m.language.name_of(pred));

  std::vector<const Law*> candidates;
  for (PredicateId pred : class_predictors) {
    const auto* cm = m.find(pred);
    for (const auto& law : cm->laws)
      if (!law.rule.premise.empty() && premise_applies(law, obj))
        candidates.push_back(&law);
  }

  ClassifyResult result;
  if (candidates.empty()) {
    // Baseline fallback: the most probable empty-premise rule decides.
    result.baseline_fallback = true;
    double best = -1.0;
    for (PredicateId pred : class_predictors)
      best = std::max(best, m.find(pred)->baseline.stats.probability);
    std::vector<const Law*> tied;
    for (PredicateId pred : class_predictors)
      if (m.find(pred)->baseline.stats.probability == best)
        tied.push_back(&m.find(pred)->baseline);
    if (tied.size() > 1) {
      result.conflicting = std::move(tied);
      return result;
    }
    result.ok = true;
    result.prediction = {tied.front()->rule.conclusion, best, std::move(tied)};
    return result;
  }

  double best = -1.0;
  for (const Law* law : candidates)
    best = std::max(best, law->stats.probability);
  std::vector<const Law*> tied;
  for (const Law* law : candidates)
    if (law->stats.probability == best) tied.push_back(law);

  bool conflict;
  if (strict_ties) {
    conflict = tied.size() > 1;
  } else {
    conflict = false;
    for (const Law* law : tied)
      if (law->rule.conclusion != tied.front()->rule.conclusion) conflict = true;
  }
  if (conflict) {
    result.conflicting = std::move(tied);
    return result;
  }
  result.ok = true;
  result.prediction = {tied.front()->rule.conclusion, best, std::move(tied)};
  return result;
}

RegressResult regress_average(const Model& m, const ObjectFeatures& obj,
                              const std::vector<PredicateId>& range_predictors,
                              bool weighted) {
  check_features(m, obj);
  RegressResult result;
  double weight_sum = 0.0, value_sum = 0.0;
  for (PredicateId pred : range_predictors) {
    const auto& def = m.language.predicates.at(static_cast<std::size_t>(pred));
    if (def.transform != TransformKind::Threshold)
      throw ConfigError("predictor " + def.name +
                        " has no numeric range provenance");
    double midpoint = 0.5 * (def.range_lo + def.threshold);
    const auto* cm = m.find(pred);
    if (!cm) continue;
    for (const auto& law : cm->laws) {
      if (law.rule.premise.empty() || !premise_applies(law, obj)) continue;
      double w = weighted ? law.stats.probability : 1.0;
      weight_sum += w;
      value_sum += w * midpoint;
      result.support_laws.push_back(&law);
    }
  }
  if (result.support_laws.empty() || weight_sum <= 0.0) return result;
  result.ok = true;
  result.value = value_sum / weight_sum;
  return result;
}

AnomalyResult anomaly_score(const Model& m, const ObjectFeatures& record,
                            double p_min) {
  if (!(p_min >= 0.0 && p_min <= 1.0))
    throw ConfigError("p_min must be in [0,1]");
  check_features(m, record);
  AnomalyResult result;
  for (const auto& cm : m.conclusions)
    for (const auto& law : cm.laws) {
      if (law.stats.probability < p_min) continue;
      if (!premise_applies(law, record)) continue;
      ++result.applicable;
      if (!record.contains(law.rule.conclusion)) ++result.violated;
    }
  if (result.applicable)
    result.score = static_cast<double>(result.violated) /
                   static_cast<double>(result.applicable);
  return result;
}

}  // namespace pld
