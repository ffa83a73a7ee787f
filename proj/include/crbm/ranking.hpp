#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crbm/errors.hpp"

namespace crbm::metrics {

/// Per-model values for the selection metrics. Failed runs carry status
/// "failed" and rank last everywhere; undefined metrics are stored as nullopt.
struct MetricReport {
  std::array<std::optional<double>, 4> r2;      // lags 0..3
  std::map<int, std::optional<double>> relapse_auc;  // month -> AUC
  std::optional<double> t_edss;
  std::array<std::optional<double>, 3> t_cdw;   // variants a, b, c
  bool failed = false;

  bool all_finite() const;
};

/// Flattened metric columns: names, values (NaN = undefined) and direction.
struct MetricTable {
  std::vector<std::string> names;
  std::vector<bool> higher_is_better;
  std::vector<bool> clinical;              // step-2 subset membership
  std::vector<std::vector<double>> values; // [model][metric]
};

MetricTable build_metric_table(const std::vector<MetricReport>& reports);

/// Rank matrix M[i][j]: rank of model i on metric j, 1 = best. Columns are
/// permutations of 1..N; ties and undefined/failed entries order by model id
/// (undefined after every defined value). Metrics undefined for all models
/// are dropped from the table beforehand.
std::vector<std::vector<int>> rank_matrix(const MetricTable& table);

/// Two-step minimax: keep the quartile of models with the smallest worst
/// rank over all metrics, then pick the kept model with the smallest worst
/// rank over the subset J (ties by model id).
int minimax_select(const std::vector<std::vector<int>>& ranks,
                   const std::vector<int>& subset_j);

}  // namespace crbm::metrics
