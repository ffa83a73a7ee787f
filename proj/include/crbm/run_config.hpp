#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crbm/adversary.hpp"
#include "crbm/calibration.hpp"
#include "crbm/generate.hpp"
#include "crbm/outcomes.hpp"
#include "crbm/schema.hpp"
#include "crbm/synth.hpp"
#include "crbm/trainer.hpp"
#include "crbm/transforms.hpp"

namespace crbm::io {

cohort::CohortSchema load_schema_json(const std::string& path);
void save_schema_json(const std::string& path, const cohort::CohortSchema& schema);

void save_normalizers_json(const std::string& path, const cohort::Normalizers& n,
                           const cohort::CohortSchema& schema);
cohort::Normalizers load_normalizers_json(const std::string& path,
                                          const cohort::CohortSchema& schema);

struct EvaluateSettings {
  int k_twins = 100;
  int k_metrics = 10;  // twins per subject inside t statistics
  metrics::AdversaryConfig adversary;
  metrics::PhiConfig phi;
  std::string relapse_variable = "relapse";
  std::string stratum_variable = "ms_type";  // CDW-a population filter
  std::string stratum_label = "PPMS";
};

struct RunConfig {
  uint64_t seed = 42;
  // data
  std::string schema_path;       // empty = built-in synthetic schema
  std::string tidy_path;         // input cohort; empty = generate synthetically
  std::string out_dir = "out";
  // split
  double f_train = 0.5, f_validation = 0.2, f_test = 0.3;
  // synth
  cohort::SynthConfig synth;
  // training
  train::Hyperparams hyperparams;
  std::vector<train::Hyperparams> grid;  // empty = single-cell training
  int lag = 2;
  // sampling / generation
  sampling::GenerateConfig generate;
  int n_subjects_generate = 100;  // digital-subject mode
  int tau_months = 33;
  // evaluation
  EvaluateSettings evaluate;
  int jobs = 0;

  cohort::CohortSchema load_schema() const;
};

RunConfig load_run_config(const std::string& path);

/// Cartesian-product expansion of the grid section; list order follows the
/// config, cell order iterates the last listed axis fastest.
std::vector<train::Hyperparams> expand_grid(const std::string& config_path);

}  // namespace crbm::io
