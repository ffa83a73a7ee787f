#pragma once

#include <optional>

#include "crbm/metrics_common.hpp"

namespace crbm::metrics {

/// Mask-weighted per-variable, per-visit mean and population std.
struct VisitMoments {
  Eigen::MatrixXd mean;  // n_vars x n_grid
  Eigen::MatrixXd std;
  Eigen::MatrixXd count;
  MaskMatrix defined;
};

VisitMoments moments_per_visit(const std::vector<TrajectoryMatrix>& cohort);

struct TheilSenFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Median of all pairwise slopes; intercept = median(y - slope x).
/// Undefined when every x is identical.
std::optional<TheilSenFit> theil_sen(const std::vector<double>& x,
                                     const std::vector<double>& y);

struct WeightedLsFit {
  double alpha = 0.0;  // intercept
  double beta = 0.0;   // slope
  double r2 = 0.0;
};

/// Closed-form weighted least squares of y on x minimizing
/// sum_i w_i (y_i - alpha - beta x_i)^2.
std::optional<WeightedLsFit> weighted_ls(const std::vector<double>& x,
                                         const std::vector<double>& y,
                                         const std::vector<double>& w);

}  // namespace crbm::metrics
