#pragma once

#include <cstdint>
#include <vector>

#include "crbm/schema.hpp"

namespace crbm::cohort {

/// Ground-truth generator for acceptance and self-consistency checks: a lag-2
/// linear-Gaussian latent severity process drives continuous variables through
/// range links and binary/ordinal variables through logistic links, with
/// missing-at-random masking.
struct SynthConfig {
  int n_subjects = 2000;
  int min_visits = 12;  // visit count including baseline
  int max_visits = 12;
  double missing_rate = 0.10;
  double static_missing_rate = 0.0;
  // Latent AR(2): s_t = phi1 s_{t-1} + phi2 s_{t-2} + noise * eps_t.
  double ar_phi1 = 0.5;
  double ar_phi2 = 0.2;
  double ar_noise = 0.6;
  double obs_noise = 0.45;    // idiosyncratic noise on each observable
  double drift_spms = 0.030;  // latent drift per visit by MS type
  double drift_ppms = 0.045;
};

/// The mixed-type schema the generator populates (15 variables: demographics,
/// MS type, relapses, 7 KFSS components, ambulation, two functional tests).
CohortSchema synth_schema();

/// Closed-form stationary variance of the AR(2) latent process.
double ar2_stationary_variance(double phi1, double phi2, double noise);

/// Simulate one stationary AR(2) path (after burn-in).
std::vector<double> simulate_ar2(double phi1, double phi2, double noise, int n,
                                 uint64_t seed);

std::vector<SubjectRecord> synth_cohort(const SynthConfig& config, uint64_t seed);

/// Fresh generator draws matched to real subjects' durations: K complete
/// trajectories per subject, used as the "perfect model" null reference.
std::vector<std::vector<SubjectRecord>> synth_fresh_twins(
    const std::vector<SubjectRecord>& subjects, int k_twins,
    const SynthConfig& config, uint64_t seed);

}  // namespace crbm::cohort
