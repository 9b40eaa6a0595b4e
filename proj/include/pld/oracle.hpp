#pragma once

#include "pld/learner.hpp"

namespace pld {

/// Exhaustive law enumeration for small instances: every premise subset of
/// size <= max_size is tested against all of its proper subsets. Refuses
/// languages with more than 16 non-conclusion predicates.
std::vector<Law> enumerate_all_laws(const Dataset& ds, PredicateId conclusion,
                                    int max_size, double a = 0.95);

}  // namespace pld
