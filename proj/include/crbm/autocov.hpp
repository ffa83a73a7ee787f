#pragma once

#include <optional>

#include "crbm/metrics_common.hpp"

namespace crbm::metrics {

/// Lag autocovariance matrix with pairwise-complete means: entry (a, b) is
/// the covariance of x_a(t) with x_b(t + lag) over all (subject, t) pairs
/// where both are observed. `defined` flags entries with at least two pairs,
/// plus the joint observation count per entry (the LS_l weights).
struct AutocovResult {
  Eigen::MatrixXd c;
  MaskMatrix defined;
  Eigen::MatrixXd weight;  // f_{a,b,lag} joint observation counts
};

/// `min_t` drops all pairs whose earlier index is below it (baseline exclusion
/// passes min_t = 1 in grid units).
AutocovResult lag_autocov(const std::vector<TrajectoryMatrix>& cohort, int lag,
                          int min_t = 0);

/// R^2_l between data and twin autocovariances over the upper triangle a <= b
/// (twin-centered denominator). Undefined when the denominator degenerates.
std::optional<double> autocov_r2(const AutocovResult& data,
                                 const AutocovResult& twin);

/// Autocorrelations rho(a,b,l) = C(a,b,l) / sqrt(C(a,a,l) C(b,b,l)); entries
/// with non-positive denominators become undefined.
AutocovResult to_autocorrelation(const AutocovResult& in);

}  // namespace crbm::metrics
