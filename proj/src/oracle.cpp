#include "pld/oracle.hpp"

#include <bit>
#include <stdexcept>

namespace pld {

std::vector<Law> enumerate_all_laws(const Dataset& ds, PredicateId conclusion,
                                    int max_size, double a) {
  if (conclusion < 0 ||
      static_cast<std::size_t>(conclusion) >= ds.columns.size())
    throw std::invalid_argument("conclusion id out of range");
  if (max_size < 0) throw std::invalid_argument("max_size must be >= 0");

  std::vector<PredicateId> pool;
  for (std::size_t p = 0; p < ds.columns.size(); ++p)
    if (static_cast<PredicateId>(p) != conclusion)
      pool.push_back(static_cast<PredicateId>(p));
  if (pool.size() > 16)
    throw std::invalid_argument(
        "oracle refuses languages with more than 16 non-conclusion "
        "predicates (got " + std::to_string(pool.size()) + ")");

  const unsigned width = static_cast<unsigned>(pool.size());
  const std::uint32_t mask_count = std::uint32_t{1} << width;
  const int limit = std::min<int>(max_size, static_cast<int>(width));

  const auto& conclusion_col = ds.columns[static_cast<std::size_t>(conclusion)];
  const std::size_t words = conclusion_col.words().size();

  std::vector<double> prob(mask_count, 0.0);
  std::vector<std::uint32_t> support(mask_count, 0), co(mask_count, 0);

  for (std::uint32_t mask = 0; mask < mask_count; ++mask) {
    if (std::popcount(mask) > limit) continue;
    std::uint32_t sup = 0, both = 0;
    for (std::size_t w = 0; w < words; ++w) {
      // All-ones start, with the tail beyond n_objects masked off.
      std::uint64_t acc = ~std::uint64_t{0};
      if (w == words - 1 && (ds.n_objects % 64) != 0)
        acc = (std::uint64_t{1} << (ds.n_objects % 64)) - 1;
      for (unsigned b = 0; b < width; ++b)
        if (mask & (std::uint32_t{1} << b))
          acc &= ds.columns[static_cast<std::size_t>(pool[b])].words()[w];
      sup += static_cast<std::uint32_t>(std::popcount(acc));
      both += static_cast<std::uint32_t>(
          std::popcount(acc & conclusion_col.words()[w]));
    }
    support[mask] = sup;
    co[mask] = both;
    prob[mask] = sup ? static_cast<double>(both) / sup : 0.0;
  }

  std::vector<Law> laws;
  for (std::uint32_t mask = 0; mask < mask_count; ++mask) {
    if (std::popcount(mask) > limit) continue;
    double p = prob[mask];
    if (!(p > 0.0)) continue;
    bool dominated = false;
    if (mask != 0) {
      for (std::uint32_t sub = (mask - 1) & mask;; sub = (sub - 1) & mask) {
        if (prob[sub] >= p) {
          dominated = true;
          break;
        }
        if (sub == 0) break;
      }
    }
    if (dominated) continue;

    Law law;
    law.rule.conclusion = conclusion;
    for (unsigned b = 0; b < width; ++b)
      if (mask & (std::uint32_t{1} << b)) law.rule.premise.push_back(pool[b]);
    law.stats.support = support[mask];
    law.stats.co_support = co[mask];
    law.stats.probability = p;
    law.stats.wilson_lb = wilson_lower_bound(co[mask], support[mask], a);
    law.level = std::popcount(mask);
    laws.push_back(std::move(law));
  }
  return laws;
}

}  // namespace pld
