#pragma once

#include <cstdint>
#include <vector>

#include "crbm/schema.hpp"

namespace crbm::cohort {

struct SplitResult {
  std::vector<SubjectRecord> train, validation, test;
};

/// Split subjects (not triplets) into disjoint train/validation/test sets.
/// Train and validation sizes are the fraction counts rounded half-up; the
/// remainder goes to test, so 2395 subjects at (0.5, 0.2, 0.3) give
/// 1198/479/718. Deterministic under the seed.
SplitResult split_dataset(const std::vector<SubjectRecord>& records,
                          double f_train, double f_validation, double f_test,
                          uint64_t seed);

}  // namespace crbm::cohort
