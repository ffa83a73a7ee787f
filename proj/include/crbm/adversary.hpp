#pragma once

#include <optional>
#include <vector>

#include "crbm/metrics_common.hpp"

namespace crbm::metrics {

enum class AdversaryFeatures {
  visit_values,      // covariate values at one visit
  visit_differences  // change from the previous visit
};

struct AdversaryResult {
  int month = 0;
  AdversaryFeatures features = AdversaryFeatures::visit_values;
  double mean_auc = 0.0;
  double std_auc = 0.0;
  int n_subjects = 0;
  int n_sims = 0;
  bool skipped = false;  // too few subjects at this visit
};

struct AdversaryConfig {
  int n_sims = 100;
  int min_subjects = 10;
  int n_folds = 5;
  double ridge_fallback = 1e-6;
  int n_threads = 0;
};

/// Logistic-regression test of indistinguishability at one visit: features
/// are the longitudinal covariates (or consecutive-visit differences), rows
/// are real subjects versus one fresh twin per subject per simulation, AUC by
/// grouped 5-fold cross-validation, aggregated over simulations. Missing real
/// values are mean imputed and the twin rows receive the same imputed values.
AdversaryResult adversary_auc(const sampling::TwinSet& twins, int month,
                              AdversaryFeatures features,
                              const AdversaryConfig& config, uint64_t seed);

/// All post-baseline visits for both feature modes.
std::vector<AdversaryResult> adversary_scan(const sampling::TwinSet& twins,
                                            const AdversaryConfig& config,
                                            uint64_t seed);

/// Binary logistic regression fit by damped Newton iterations; switches to a
/// small ridge penalty when the classes are (near) separable.
class LogisticRegression {
 public:
  void fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
           double ridge_fallback = 1e-6);
  Eigen::VectorXd decision(const Eigen::MatrixXd& x) const;

 private:
  Eigen::VectorXd coef_;  // last entry is the intercept
  Eigen::VectorXd mean_, scale_;
};

}  // namespace crbm::metrics
