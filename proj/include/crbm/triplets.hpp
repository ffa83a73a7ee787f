#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "crbm/layout.hpp"
#include "crbm/schema.hpp"
#include "crbm/transforms.hpp"

namespace crbm::cohort {

/// One training sample: the normalized visible vector for a window of lag+1
/// consecutive visits plus the static block, with per-entry observation mask.
struct Triplet {
  Eigen::VectorXd visible;
  Eigen::VectorXd mask;  // 1 observed, 0 missing
  std::string subject_id;
  int base_month = 0;
};

/// Build all windows (t, t+3, ..., t+3*lag) per subject. Windows whose most
/// recent visit has no observed longitudinal value are dropped.
std::vector<Triplet> build_triplets(const std::vector<SubjectRecord>& records,
                                    const CohortSchema& schema,
                                    const Normalizers& norms,
                                    const BlockLayout& layout);

}  // namespace crbm::cohort
