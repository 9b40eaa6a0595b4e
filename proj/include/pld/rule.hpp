#pragma once

#include <cstdint>
#include <vector>

#include "pld/dataset.hpp"

namespace pld {

/// Premise -> conclusion over predicate ids. Premise is kept sorted and
/// duplicate-free; the conclusion never appears in it.
struct Rule {
  std::vector<PredicateId> premise;
  PredicateId conclusion = 0;

  std::size_t size() const { return premise.size(); }
  bool premise_contains(PredicateId p) const;
  bool operator==(const Rule&) const = default;
};

struct RuleStats {
  std::size_t support = 0;     // objects satisfying the premise
  std::size_t co_support = 0;  // objects satisfying premise and conclusion
  double probability = 0.0;    // co_support / support, 0 when support = 0
  double wilson_lb = 0.0;      // one-sided lower confidence bound

  bool operator==(const RuleStats&) const = default;
};

/// Indices of objects on which every premise predicate holds. When a scope
/// is given only those objects are examined; the scope must contain every
/// object satisfying some sub-premise, so the result is scope-independent.
std::vector<std::uint32_t> premise_objects(
    const Dataset& ds, const std::vector<PredicateId>& premise,
    const std::vector<std::uint32_t>* scope = nullptr);

RuleStats stats_from_objects(const Dataset& ds, const Rule& r,
                             const std::vector<std::uint32_t>& objects,
                             double a);

RuleStats rule_stats(const Dataset& ds, const Rule& r,
                     const std::vector<std::uint32_t>* scope = nullptr,
                     double a = 0.95);

/// Wilson score lower confidence bound for k successes in n trials at
/// confidence level a (z taken as for a two-sided interval of level a,
/// e.g. a = 0.95 gives z = 1.96). n = 0 yields 0.
double wilson_lower_bound(std::size_t k, std::size_t n, double a);

double normal_quantile(double p);

/// A rule is a probabilistic law iff its probability is non-zero and
/// strictly exceeds the probability of every proper-subset rule.
bool law_condition(double rule_prob,
                   const std::vector<double>& proper_subrule_probs);

struct SignificanceContext {
  std::size_t min_support = 1;
  double baseline_prob = 0.0;  // probability of the empty-premise rule
  double a = 0.0;              // 0 disables the Wilson gate

  bool wilson_enabled() const { return a > 0.0; }
};

bool significance_check(const RuleStats& stats, const SignificanceContext& ctx);

}  // namespace pld
