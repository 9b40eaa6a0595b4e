#include "pld/cluster.hpp"

#include <algorithm>
#include <set>

namespace pld {

namespace {

bool subset_of(const std::vector<PredicateId>& sub,
               const std::set<PredicateId>& super) {
  for (PredicateId p : sub)
    if (!super.count(p)) return false;
  return true;
}

double agreement_on(const std::vector<Law>& laws,
                    const std::set<PredicateId>& feature_set) {
  double sum = 0.0;
  for (const auto& law : laws) {
    if (!subset_of(law.rule.premise, feature_set)) continue;
    if (feature_set.count(law.rule.conclusion))
      sum += law.stats.probability;
    else
      sum -= law.stats.probability;
  }
  return sum;
}

}  // namespace

double agreement(const std::vector<Law>& laws,
                 const std::vector<PredicateId>& feature_set) {
  return agreement_on(laws,
                      std::set<PredicateId>(feature_set.begin(), feature_set.end()));
}

std::vector<Law> characteristic_set(const std::vector<Law>& laws,
                                    const std::vector<PredicateId>& feature_set) {
  std::set<PredicateId> fs(feature_set.begin(), feature_set.end());
  std::vector<Law> out;
  for (const auto& law : laws)
    if (subset_of(law.rule.premise, fs) && fs.count(law.rule.conclusion))
      out.push_back(law);
  return out;
}

std::vector<FeatureCluster> find_feature_clusters(
    const std::vector<Law>& laws, const PredicateLanguage& language) {
  std::vector<FeatureCluster> clusters;
  if (laws.empty()) return clusters;

  std::vector<std::set<PredicateId>> seeds;
  for (const auto& p : language.predicates) seeds.push_back({p.id});
  for (const auto& law : laws) {
    std::set<PredicateId> s(law.rule.premise.begin(), law.rule.premise.end());
    s.insert(law.rule.conclusion);
    seeds.push_back(std::move(s));
  }

  std::set<std::vector<PredicateId>> found;
  for (auto current : seeds) {
    // Steepest ascent over single add/remove moves. Ties prefer the smaller
    // resulting set, then the lexicographically smallest one.
    double value = agreement_on(laws, current);
    while (true) {
      std::set<PredicateId> best_move;
      double best_value = value;
      bool improved = false;
      auto consider = [&](std::set<PredicateId>&& neighbor) {
        double v = agreement_on(laws, neighbor);
        if (v <= value) return;
        if (!improved || v > best_value ||
            (v == best_value &&
             (neighbor.size() < best_move.size() ||
              (neighbor.size() == best_move.size() &&
               std::lexicographical_compare(neighbor.begin(), neighbor.end(),
                                            best_move.begin(), best_move.end()))))) {
          best_move = std::move(neighbor);
          best_value = v;
          improved = true;
        }
      };
      for (const auto& p : language.predicates) {
        std::set<PredicateId> neighbor = current;
        if (current.count(p.id))
          neighbor.erase(p.id);
        else
          neighbor.insert(p.id);
        consider(std::move(neighbor));
      }
      if (!improved) break;
      current = std::move(best_move);
      value = best_value;
    }

    std::vector<PredicateId> features(current.begin(), current.end());
    if (!found.insert(features).second) continue;

    // Exhaustive single-move local-maximality check.
    bool maximal = true;
    for (const auto& p : language.predicates) {
      std::set<PredicateId> neighbor = current;
      if (current.count(p.id))
        neighbor.erase(p.id);
      else
        neighbor.insert(p.id);
      if (agreement_on(laws, neighbor) >= value) {
        maximal = false;
        break;
      }
    }
    if (!maximal) continue;

    FeatureCluster cluster;
    cluster.features = std::move(features);
    cluster.agreement = value;
    cluster.characteristic_set = characteristic_set(laws, cluster.features);
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

ClusterHierarchy assign_objects(std::vector<FeatureCluster> clusters,
                                const Dataset& ds, double epsilon) {
  ClusterHierarchy h;
  h.clusters = std::move(clusters);
  h.epsilon = epsilon;

  for (std::size_t o = 0; o < ds.n_objects; ++o) {
    ObjectAssignment a;
    a.object = o;
    std::vector<PredicateId> features;
    for (std::size_t p = 0; p < ds.columns.size(); ++p)
      if (ds.columns[p].test(o)) features.push_back(static_cast<PredicateId>(p));
    for (std::size_t c = 0; c < h.clusters.size(); ++c) {
      double score = agreement(h.clusters[c].characteristic_set, features);
      if (a.cluster < 0 || score > a.score) {
        a.cluster = static_cast<int>(c);
        a.score = score;
      }
    }
    h.assignments.push_back(a);
  }

  for (std::size_t i = 0; i < h.clusters.size(); ++i)
    for (std::size_t j = 0; j < h.clusters.size(); ++j) {
      if (i == j) continue;
      const auto& fi = h.clusters[i].features;
      const auto& fj = h.clusters[j].features;
      if (fi.size() < fj.size() &&
          std::includes(fj.begin(), fj.end(), fi.begin(), fi.end()))
        h.order.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  return h;
}

std::vector<Law> all_model_laws(const Model& m) {
  std::vector<Law> laws;
  for (const auto& cm : m.conclusions)
    laws.insert(laws.end(), cm.laws.begin(), cm.laws.end());
  return laws;
}

}  // namespace pld
