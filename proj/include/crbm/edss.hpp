#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crbm/schema.hpp"

namespace crbm::ms {

/// The seven KFSS components in canonical order with their maxima.
struct KfssVector {
  // bowel/bladder, brain stem, cerebellar, mental, pyramidal, sensory, visual
  static constexpr std::array<int, 7> kMaxima = {6, 5, 5, 5, 6, 6, 6};
  static constexpr std::array<const char*, 7> kNames = {
      "kfss_bowel_bladder", "kfss_brain_stem", "kfss_cerebellar", "kfss_mental",
      "kfss_pyramidal",     "kfss_sensory",    "kfss_visual"};
  std::array<int, 7> grades = {0, 0, 0, 0, 0, 0, 0};

  void validate() const;
};

/// Ambulation score 0..11 inferred from EDSS: 0 for EDSS <= 4.5, else
/// 2 * (EDSS - 4.5). Throws DataError for values off the half-point grid.
int ambulation_from_edss(double edss);

/// One rule of the KFSS -> EDSS table for the sub-4.5 regime: the rule fires
/// when, for every (grade, count) requirement, at least `count` components
/// have a grade >= `grade`. Rules are evaluated in descending EDSS order and
/// the first match wins, so the mapping is monotone in every component.
struct KfssRule {
  double edss = 0.0;
  std::vector<std::pair<int, int>> min_count_at_grade;  // (grade, count)
};

struct KfssRuleTable {
  std::vector<KfssRule> rules;  // kept sorted by descending EDSS

  /// EDSS <= 4.5 implied by the KFSS components alone.
  double evaluate(const KfssVector& kfss) const;
  static KfssRuleTable default_table();
  static KfssRuleTable from_json_file(const std::string& path);
  void save_json(const std::string& path) const;
};

/// Total EDSS: 4.5 + ambulation/2 when ambulation > 0; otherwise the rule
/// table applied to the KFSS components (capped at 4.5).
double edss_total(const KfssVector& kfss, int ambulation, const KfssRuleTable& table);

/// Per-visit EDSS on the visit grid with an observed mask.
struct EdssTrajectory {
  std::vector<int> months;
  std::vector<double> edss;
  std::vector<uint8_t> observed;

  std::optional<double> at(int month) const;
};

/// Recompute an EDSS trajectory from a record's KFSS + ambulation variables.
/// Visits missing any component are marked unobserved.
EdssTrajectory edss_trajectory(const cohort::SubjectRecord& rec,
                               const cohort::CohortSchema& schema,
                               const KfssRuleTable& table);

/// EDSS(18) - EDSS(0) when both are observed.
std::optional<double> edss_change_18m(const EdssTrajectory& traj);

/// Cross-check report comparing reported EDSS values against recomputation
/// from components (per-subject disagreement counts).
struct EdssCrosscheck {
  long n_compared = 0;
  long n_disagree = 0;
  std::vector<std::string> examples;  // "subject/month: reported vs recomputed"
};

EdssCrosscheck edss_crosscheck(const std::vector<cohort::SubjectRecord>& records,
                               const cohort::CohortSchema& schema,
                               const std::string& reported_edss_variable,
                               const KfssRuleTable& table);

}  // namespace crbm::ms
