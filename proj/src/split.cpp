#include "crbm/split.hpp"

#include <cmath>
#include <numeric>

#include "crbm/rng.hpp"

namespace crbm::cohort {

SplitResult split_dataset(const std::vector<SubjectRecord>& records,
                          double f_train, double f_validation, double f_test,
                          uint64_t seed) {
  if (f_train <= 0.0 || f_validation <= 0.0 || f_test <= 0.0) {
    throw ConfigError("split fractions must be positive");
  }
  if (std::abs(f_train + f_validation + f_test - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }
  const size_t n = records.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(derive_seed(seed, 0x5711ULL));
  rng.shuffle(idx);

  size_t n_train = static_cast<size_t>(std::floor(n * f_train + 0.5));
  size_t n_val = static_cast<size_t>(std::floor(n * f_validation + 0.5));
  n_train = std::min(n_train, n);
  n_val = std::min(n_val, n - n_train);

  SplitResult out;
  for (size_t i = 0; i < n; ++i) {
    const SubjectRecord& r = records[idx[i]];
    if (i < n_train) {
      out.train.push_back(r);
    } else if (i < n_train + n_val) {
      out.validation.push_back(r);
    } else {
      out.test.push_back(r);
    }
  }
  return out;
}

}  // namespace crbm::cohort
