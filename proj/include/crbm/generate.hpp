#pragma once

#include <cstdint>
#include <vector>

#include "crbm/gibbs.hpp"
#include "crbm/schema.hpp"
#include "crbm/transforms.hpp"
#include "crbm/triplets.hpp"

namespace crbm::sampling {

/// Generation settings: sweeps per conditional block draw with the final
/// sweeps annealing sigma_beta to 0 (test-time autocorrelation is 0).
struct GenerateConfig {
  AnnealSchedule schedule{100, 50, 0.15};
};

/// One simulated trajectory of tau months sampled from the model joint:
/// baseline from the (annealed) joint over all blocks keeping (x_0, static),
/// later visits by clamping the most recent lag visits and sampling the next
/// block. Decoded to natural units.
cohort::SubjectRecord generate_digital_subject(
    const CrbmParams& params, const cohort::CohortSchema& schema,
    const cohort::Normalizers& norms, const GenerateConfig& config, int tau_months,
    uint64_t seed);

/// K trajectories whose baseline block and static block are clamped to the
/// subject's observed baseline values (unobserved baseline entries are
/// sampled conditionally on the first draw and then kept fixed).
std::vector<cohort::SubjectRecord> generate_digital_twins(
    const CrbmParams& params, const cohort::CohortSchema& schema,
    const cohort::Normalizers& norms, const cohort::SubjectRecord& subject,
    int tau_months, int k_twins, const GenerateConfig& config, uint64_t seed);

/// Real subjects paired with K generated trajectories each, aligned on the
/// visit grid; the common input to all twin-vs-data statistics.
struct TwinSet {
  cohort::CohortSchema schema;
  std::vector<cohort::SubjectRecord> subjects;
  std::vector<std::vector<cohort::SubjectRecord>> twins;  // [subject][k]

  int n_subjects() const { return static_cast<int>(subjects.size()); }
  int k_twins() const { return twins.empty() ? 0 : static_cast<int>(twins[0].size()); }
};

/// Twins for every subject (duration matched to each subject), parallelized
/// across subjects with per-subject seeds.
TwinSet generate_twinset(const CrbmParams& params, const cohort::CohortSchema& schema,
                         const cohort::Normalizers& norms,
                         const std::vector<cohort::SubjectRecord>& subjects,
                         int k_twins, const GenerateConfig& config, uint64_t seed,
                         int n_threads = 0);

}  // namespace crbm::sampling
