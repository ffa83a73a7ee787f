#pragma once

#include <Eigen/Core>
#include <vector>

#include "crbm/generate.hpp"
#include "crbm/schema.hpp"

namespace crbm::metrics {

using MaskMatrix = Eigen::Matrix<uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// One trajectory on the common visit grid: rows are the selected variables,
/// columns are visits 0, 3, 6, ...
struct TrajectoryMatrix {
  Eigen::MatrixXd values;
  MaskMatrix mask;
};

/// Variables entering twin-vs-data statistics: longitudinal, excluding the
/// baseline indicator. `exclude_binary` drops binary variables (used by the
/// per-subject calibration statistic, which is meaningless for binaries).
std::vector<int> metric_variables(const cohort::CohortSchema& schema,
                                  bool exclude_binary = false);

/// Number of grid columns needed to hold every subject's duration.
int grid_size(const std::vector<cohort::SubjectRecord>& records,
              const cohort::CohortSchema& schema);

TrajectoryMatrix record_to_matrix(const cohort::SubjectRecord& rec,
                                  const cohort::CohortSchema& schema,
                                  const std::vector<int>& variables, int n_grid);

/// Data cohort: one matrix per subject.
std::vector<TrajectoryMatrix> data_matrices(const sampling::TwinSet& twins,
                                            const std::vector<int>& variables,
                                            int n_grid);

/// Twin cohort: one matrix per (subject, twin) pair, masked by the subject's
/// own observation pattern so that twin statistics see the data's missingness.
std::vector<TrajectoryMatrix> twin_matrices(const sampling::TwinSet& twins,
                                            const std::vector<int>& variables,
                                            int n_grid, int k_limit = 0);

}  // namespace crbm::metrics
