#pragma once

#include <string>
#include <vector>

#include "crbm/schema.hpp"

namespace crbm::cohort {

/// Load a tidy cohort table: comma-separated, UTF-8, header row
/// "subject_id,visit_month,<variable columns>". Empty cells are missing.
/// Categorical cells hold label text. Static variables may repeat across a
/// subject's rows but must agree.
std::vector<SubjectRecord> load_tidy(const std::string& path,
                                     const CohortSchema& schema);

/// Write records in the same dialect (one row per subject visit, statics
/// repeated on every row).
void save_tidy(const std::string& path, const std::vector<SubjectRecord>& records,
               const CohortSchema& schema);

struct RawMeasurement {
  std::string subject_id;
  int day = 0;
  std::string variable;
  double value = 0.0;  // categorical values as label indices
};

/// Group raw day-stamped measurements into windows centered on each visit
/// (90-day windows for a 3-month interval) and average within the window.
/// Binary/ordinal/categorical averages are rounded to the nearest valid level
/// (ties up); windows without a measurement stay missing.
std::vector<SubjectRecord> bin_visits(const std::vector<RawMeasurement>& raw,
                                      const CohortSchema& schema);

/// Shortest decimal rendering that round-trips to the same double.
std::string format_double(double v);

}  // namespace crbm::cohort
