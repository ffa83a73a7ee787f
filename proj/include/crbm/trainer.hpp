#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "crbm/gibbs.hpp"
#include "crbm/random_forest.hpp"
#include "crbm/triplets.hpp"

namespace crbm::train {

struct Hyperparams {
  int n_hidden = 32;
  int n_epochs = 100;
  int batch_size = 256;
  double learning_rate = 0.01;  // initial; decays linearly to lr_decay_to of it
  double sigma_beta = 0.15;     // driven-sampling std during training
  double l2_penalty = 1e-4;     // weights only
  double adversary_weight = 0.3;  // 0 = pure composite likelihood
  int mc_steps = 10;              // chain steps per gradient update
  int positive_fill_sweeps = 5;   // inner sweeps over missing entries
  int critic_trees = 50;
  int critic_depth = 8;
  double lr_decay_to = 0.1;
  double driven_autocorr = 0.9;
  std::string optimizer = "adam";
  int n_chains = 0;  // persistent fantasy chains; 0 = batch_size

  void validate() const;
};

/// Mean sufficient statistics E[s], s = -dU/dtheta, plus per-sample hidden
/// conditional means (the critic's features).
struct PhaseStats {
  ParamTensors moments;
  Eigen::MatrixXd hidden_means;  // n_hidden x n_samples
};

/// Data-conditioned statistics: observed entries clamped, missing entries
/// resampled by short Gibbs sweeps over the missing coordinates.
PhaseStats positive_phase(const CrbmParams& params, const Eigen::MatrixXd& batch_v,
                          const Eigen::MatrixXd& batch_mask, int fill_sweeps,
                          Rng& rng);

/// Model statistics from persistent driven chains after mc_steps updates.
PhaseStats negative_phase(const CrbmParams& params, sampling::ChainSet& chains,
                          int mc_steps);

RandomForest critic_fit(const Eigen::MatrixXd& data_hidden_means,
                        const Eigen::MatrixXd& model_hidden_means, int n_trees,
                        int max_depth, uint64_t seed);

/// Score-function gradient of the adversarial objective: minus the covariance
/// between the centered critic score T(h) = 2 q(data|h) - 1 and the model
/// statistics, estimated over the negative-phase chains.
ParamTensors adversarial_gradient(const CrbmParams& params,
                                  const Eigen::MatrixXd& chain_v,
                                  const Eigen::MatrixXd& chain_hidden_means,
                                  const RandomForest& critic);

struct EpochLog {
  int epoch = 0;
  double reconstruction_rmse = 0.0;
  double free_energy_train = 0.0;
  double free_energy_heldout = 0.0;
  double free_energy_gap = 0.0;  // train minus held-out
  double grad_norm = 0.0;
  double beta_mean = 1.0;
  double learning_rate = 0.0;
};

struct TrainResult {
  CrbmParams params;
  std::vector<EpochLog> log;
  bool ok = false;
  std::string failure;  // non-empty when a run diverged
};

/// Minimize C = -gamma L + (1 - gamma) A + l2 |W|^2 / 2 with ADAM, gamma =
/// 1 - adversary_weight. Deterministic for fixed (data, hyperparams, seed).
TrainResult train(const std::vector<cohort::Triplet>& triplets,
                  const BlockLayout& layout, const Hyperparams& hp, uint64_t seed,
                  const std::vector<cohort::Triplet>* heldout = nullptr,
                  UnitKind hidden_kind = UnitKind::relu_hidden);

/// Stack triplets as (values, mask) column matrices.
void triplets_to_matrices(const std::vector<cohort::Triplet>& triplets,
                          Eigen::MatrixXd* values, Eigen::MatrixXd* mask);

}  // namespace crbm::train
