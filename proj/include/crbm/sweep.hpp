#pragma once

#include <string>
#include <vector>

#include "crbm/autocov.hpp"
#include "crbm/ranking.hpp"
#include "crbm/run_config.hpp"

namespace crbm::io {

struct SweepCell {
  int index = -1;
  train::Hyperparams hp;
  std::string status = "pending";  // pending | ok | failed
  metrics::MetricReport metrics;
  std::string model_path;
  std::string error;
};

struct SweepOutcome {
  std::vector<SweepCell> cells;
  int selected = -1;
  std::vector<std::vector<int>> ranks;
  metrics::MetricTable table;
};

struct SweepInputs {
  cohort::CohortSchema schema;
  cohort::Normalizers norms;
  BlockLayout layout;
  std::vector<cohort::Triplet> train_triplets;
  std::vector<cohort::SubjectRecord> validation;
  sampling::GenerateConfig generate;
  EvaluateSettings evaluate;
};

/// Evaluate one trained model's selection metrics on a validation cohort
/// (K = k_metrics twins per subject).
metrics::MetricReport evaluate_cell(const CrbmParams& params, const SweepInputs& in,
                                    uint64_t seed);

/// Train + evaluate every grid cell, resumably: completed cells are loaded
/// from `<out_dir>/cells/cell_NNNN.json` and never re-run. Cell failures are
/// recorded, not fatal. Selection uses the two-step minimax over the ranks.
SweepOutcome run_sweep(const SweepInputs& in,
                       const std::vector<train::Hyperparams>& grid,
                       const std::string& out_dir, uint64_t seed, int jobs,
                       bool resume);

void save_rank_csv(const std::string& path, const metrics::MetricTable& table,
                   const std::vector<std::vector<int>>& ranks);

}  // namespace crbm::io
