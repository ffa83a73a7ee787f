#pragma once

#include <string>

#include "crbm/autocov.hpp"
#include "crbm/descriptive.hpp"
#include "crbm/ranking.hpp"
#include "crbm/run_config.hpp"

namespace crbm::io {

/// Everything the evaluation emits, kept in memory for programmatic checks.
struct EvaluationBundle {
  metrics::VisitMoments data_moments, twin_moments;
  std::optional<metrics::TheilSenFit> mean_fit, std_fit;
  std::array<std::optional<double>, 4> r2;              // Eq-form R^2 per lag
  std::array<std::optional<metrics::WeightedLsFit>, 4> rho_fit;  // on correlations
  std::vector<metrics::PhiCell> phi;
  std::vector<metrics::AdversaryResult> adversary;
  metrics::MetricReport metric_report;
};

/// Compute the full goodness-of-fit bundle for a twin set.
EvaluationBundle evaluate_twinset(const sampling::TwinSet& twins,
                                  const EvaluateSettings& settings, uint64_t seed);

/// Write the bundle as CSV tables plus a JSON summary under out_dir.
void write_evaluation_reports(const std::string& out_dir,
                              const sampling::TwinSet& twins,
                              const EvaluationBundle& bundle);

}  // namespace crbm::io
