#include "crbm/metrics_common.hpp"

#include <algorithm>

namespace crbm::metrics {

std::vector<int> metric_variables(const cohort::CohortSchema& schema,
                                  bool exclude_binary) {
  std::vector<int> out;
  for (int i = 0; i < schema.n_variables(); ++i) {
    const auto& v = schema.variables[i];
    if (!v.longitudinal || v.baseline_indicator) continue;
    if (exclude_binary && v.kind == cohort::VarKind::binary) continue;
    out.push_back(i);
  }
  return out;
}

int grid_size(const std::vector<cohort::SubjectRecord>& records,
              const cohort::CohortSchema& schema) {
  int longest = 0;
  for (const auto& r : records) longest = std::max(longest, r.duration_months());
  return longest / schema.visit_interval_months + 1;
}

TrajectoryMatrix record_to_matrix(const cohort::SubjectRecord& rec,
                                  const cohort::CohortSchema& schema,
                                  const std::vector<int>& variables, int n_grid) {
  TrajectoryMatrix out;
  out.values.setZero(variables.size(), n_grid);
  out.mask.setZero(variables.size(), n_grid);
  for (const auto& [month, row] : rec.visits) {
    const int t = month / schema.visit_interval_months;
    if (t >= n_grid) continue;
    for (size_t a = 0; a < variables.size(); ++a) {
      if (row.is_observed(variables[a])) {
        out.values(a, t) = row.values[variables[a]];
        out.mask(a, t) = 1;
      }
    }
  }
  return out;
}

std::vector<TrajectoryMatrix> data_matrices(const sampling::TwinSet& twins,
                                            const std::vector<int>& variables,
                                            int n_grid) {
  std::vector<TrajectoryMatrix> out;
  out.reserve(twins.subjects.size());
  for (const auto& rec : twins.subjects) {
    out.push_back(record_to_matrix(rec, twins.schema, variables, n_grid));
  }
  return out;
}

std::vector<TrajectoryMatrix> twin_matrices(const sampling::TwinSet& twins,
                                            const std::vector<int>& variables,
                                            int n_grid, int k_limit) {
  std::vector<TrajectoryMatrix> out;
  for (size_t i = 0; i < twins.subjects.size(); ++i) {
    const TrajectoryMatrix data =
        record_to_matrix(twins.subjects[i], twins.schema, variables, n_grid);
    const int k_max = k_limit > 0
                          ? std::min<int>(k_limit, twins.twins[i].size())
                          : static_cast<int>(twins.twins[i].size());
    for (int k = 0; k < k_max; ++k) {
      TrajectoryMatrix tm =
          record_to_matrix(twins.twins[i][k], twins.schema, variables, n_grid);
      tm.mask = data.mask;  // twin statistics inherit the data's missingness
      out.push_back(std::move(tm));
    }
  }
  return out;
}

}  // namespace crbm::metrics
