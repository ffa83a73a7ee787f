#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crbm/errors.hpp"

namespace crbm::cohort {

enum class VarKind { binary, ordinal, categorical, continuous };
enum class Transform { none, scale_by_reciprocal_max, standardize, logit_range };

struct VariableSpec {
  std::string name;
  VarKind kind = VarKind::binary;
  bool longitudinal = false;

  int ordinal_max = 1;                  // ordinal
  std::vector<std::string> labels;      // categorical
  double lo = 0.0, hi = 1.0;            // continuous domain
  Transform transform = Transform::none;
  double logit_delta = 0.5;             // buffer for logit_range
  bool round_inverse = false;           // integer-valued continuous (PASAT)
  bool baseline_indicator = false;      // 1 at baseline, 0 afterwards

  void validate() const;
  bool in_domain(double v) const;
  /// Nearest valid value (level rounding for discrete, clamping for continuous).
  double snap(double v) const;
};

struct CohortSchema {
  std::vector<VariableSpec> variables;
  int visit_interval_months = 3;
  int max_visits = 20;

  void validate() const;

  int n_variables() const { return static_cast<int>(variables.size()); }
  int index_of(const std::string& name) const;  // -1 if absent
  std::vector<int> longitudinal_indices() const;
  std::vector<int> static_indices() const;
  /// Index of the designated baseline-indicator variable, -1 if none.
  int baseline_indicator_index() const;
  /// Hash of the structural content, embedded in model files.
  uint64_t hash() const;
};

/// One visit row: values and observation indicators over all schema variables
/// (static entries are only meaningful in SubjectRecord::statics).
struct MaskedRow {
  std::vector<double> values;
  std::vector<uint8_t> observed;

  explicit MaskedRow(int n = 0) : values(n, 0.0), observed(n, 0) {}
  bool is_observed(int i) const { return observed[i] != 0; }
  void set(int i, double v) {
    values[i] = v;
    observed[i] = 1;
  }
  void clear(int i) {
    values[i] = 0.0;
    observed[i] = 0;
  }
  int n() const { return static_cast<int>(values.size()); }
};

struct SubjectRecord {
  std::string subject_id;
  MaskedRow statics;                // indexed by schema variable order
  std::map<int, MaskedRow> visits;  // month -> row (schema variable order)

  /// Largest visit month present (0 when only baseline).
  int duration_months() const { return visits.empty() ? 0 : visits.rbegin()->first; }
  bool has_visit(int month) const { return visits.count(month) > 0; }
};

/// Throws DataError naming subject/variable/visit for any out-of-domain value
/// or off-grid visit month.
void validate_record(const SubjectRecord& rec, const CohortSchema& schema);

}  // namespace crbm::cohort
