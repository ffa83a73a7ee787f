#pragma once

#include <string>

#include "crbm/run_config.hpp"

namespace crbm::io {

/// Load (or synthesize) the cohort, split it, fit normalizers on the training
/// split and write schema/normalizers/split manifest/counts to out_dir.
void cmd_prepare(const RunConfig& config);

/// Write a synthetic cohort as tidy CSV (plus its schema).
void cmd_synth(const RunConfig& config, const std::string& out_csv);

/// Grid-train, rank with the two-step minimax, then fit the final model on
/// train + validation. Requires cmd_prepare artifacts in out_dir.
void cmd_sweep(const RunConfig& config, bool resume);

/// Train a single model with the config's hyperparams on the training split.
void cmd_train(const RunConfig& config, const std::string& model_out);

/// Generate digital subjects or digital twins into a tidy CSV.
void cmd_generate(const RunConfig& config, const std::string& model_path,
                  const std::string& mode, const std::string& out_csv);

/// Full goodness-of-fit report bundle for a model on the test split.
void cmd_evaluate(const RunConfig& config, const std::string& model_path,
                  const std::string& twins_source);

}  // namespace crbm::io
