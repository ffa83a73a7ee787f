#pragma once

#include <vector>

#include "crbm/schema.hpp"

namespace crbm::cohort {

/// Per-variable fitted normalization parameters. Standardization statistics
/// come from the training split only; ordinal scales and logit ranges are
/// schema-derived.
struct Normalizers {
  struct Entry {
    double mean = 0.0;   // standardize
    double std = 1.0;    // standardize
    double scale = 1.0;  // 1/max for ordinals
    double lo = 0.0, hi = 1.0, delta = 0.5;  // logit_range
  };
  std::vector<Entry> entries;  // schema variable order
};

enum class Direction { forward, inverse };

/// Fit normalizers from training-split records. Throws RunError if a
/// standardized variable has zero variance in the observed training values.
Normalizers fit_normalizers(const std::vector<SubjectRecord>& train,
                            const CohortSchema& schema);

/// Apply a variable's normalizing transform. Forward maps natural values to
/// model space; inverse maps back, rounding discrete variables to their grid
/// and clamping continuous variables to their domain.
double transform_value(double value, const VariableSpec& spec,
                       const Normalizers::Entry& norm, Direction dir);

}  // namespace crbm::cohort
