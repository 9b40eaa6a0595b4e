#include "pld/rule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pld/errors.hpp"

namespace pld {

bool Rule::premise_contains(PredicateId p) const {
  return std::binary_search(premise.begin(), premise.end(), p);
}

namespace {

void check_ids(const Dataset& ds, const Rule& r) {
  auto valid = [&](PredicateId p) {
    return p >= 0 && static_cast<std::size_t>(p) < ds.columns.size();
  };
  if (!valid(r.conclusion))
    throw std::invalid_argument("conclusion id out of range");
  for (PredicateId p : r.premise) {
    if (!valid(p)) throw std::invalid_argument("premise id out of range");
    if (p == r.conclusion)
      throw std::invalid_argument("conclusion appears in the premise");
  }
}

}  // namespace

std::vector<std::uint32_t> premise_objects(
    const Dataset& ds, const std::vector<PredicateId>& premise,
    const std::vector<std::uint32_t>* scope) {
  std::vector<std::uint32_t> out;
  if (scope) {
    out.reserve(scope->size());
    for (std::uint32_t o : *scope) {
      bool all = true;
      for (PredicateId p : premise)
        if (!ds.columns[static_cast<std::size_t>(p)].test(o)) {
          all = false;
          break;
        }
      if (all) out.push_back(o);
    }
    return out;
  }
  if (premise.empty()) {
    out.resize(ds.n_objects);
    for (std::size_t i = 0; i < ds.n_objects; ++i)
      out[i] = static_cast<std::uint32_t>(i);
    return out;
  }
  // Word-wise intersection of the premise columns.
  const auto& first = ds.columns[static_cast<std::size_t>(premise.front())];
  std::vector<std::uint64_t> acc = first.words();
  for (std::size_t i = 1; i < premise.size(); ++i) {
    const auto& words = ds.columns[static_cast<std::size_t>(premise[i])].words();
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] &= words[w];
  }
  for (std::size_t w = 0; w < acc.size(); ++w) {
    std::uint64_t bits = acc[w];
    while (bits) {
      unsigned tz = static_cast<unsigned>(std::countr_zero(bits));
      out.push_back(static_cast<std::uint32_t>(w * 64 + tz));
      bits &= bits - 1;
    }
  }
  return out;
}

RuleStats stats_from_objects(const Dataset& ds, const Rule& r,
                             const std::vector<std::uint32_t>& objects,
                             double a) {
  RuleStats s;
  s.support = objects.size();
  const auto& conclusion = ds.columns[static_cast<std::size_t>(r.conclusion)];
  for (std::uint32_t o : objects)
    if (conclusion.test(o)) ++s.co_support;
  s.probability = s.support ? static_cast<double>(s.co_support) /
                                  static_cast<double>(s.support)
                            : 0.0;
  s.wilson_lb = wilson_lower_bound(s.co_support, s.support, a);
  return s;
}

RuleStats rule_stats(const Dataset& ds, const Rule& r,
                     const std::vector<std::uint32_t>* scope, double a) {
  check_ids(ds, r);
  return stats_from_objects(ds, r, premise_objects(ds, r.premise, scope), a);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw ConfigError("normal quantile requires p in (0,1)");
  // Acklam's rational approximation, |relative error| < 1.15e-9.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

double wilson_lower_bound(std::size_t k, std::size_t n, double a) {
  if (k > n) throw std::invalid_argument("successes exceed trials");
  if (!(a > 0.0 && a < 1.0))
    throw ConfigError("confidence level must be in (0,1)");
  if (n == 0) return 0.0;
  double z = normal_quantile(0.5 + a / 2.0);
  double nn = static_cast<double>(n);
  double phat = static_cast<double>(k) / nn;
  double z2 = z * z;
  double denom = 1.0 + z2 / nn;
  double center = phat + z2 / (2.0 * nn);
  double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
  double lb = (center - half) / denom;
  return std::clamp(lb, 0.0, phat);
}

bool law_condition(double rule_prob,
                   const std::vector<double>& proper_subrule_probs) {
  if (!(rule_prob > 0.0)) return false;
  for (double p : proper_subrule_probs)
    if (p >= rule_prob) return false;
  return true;
}

bool significance_check(const RuleStats& stats, const SignificanceContext& ctx) {
  if (stats.support < ctx.min_support) return false;
  if (ctx.wilson_enabled() && !(stats.wilson_lb > ctx.baseline_prob))
    return false;
  return true;
}

}  // namespace pld
