#pragma once

#include <Eigen/Core>
#include <vector>

#include "crbm/beta_process.hpp"
#include "crbm/model.hpp"

namespace crbm::sampling {

/// A batch of Gibbs chains evolving against shared read-only parameters.
/// Each chain carries its own inverse-temperature process; clamped entries
/// are bit-identical across any number of steps.
class ChainSet {
 public:
  ChainSet(const CrbmParams& params, int n_chains, const BetaProcess& proc,
           uint64_t seed);

  /// One block update: advance beta, draw h ~ p(h|v), then v ~ p(v|h), both
  /// tempered by the current beta.
  void step(const CrbmParams& params);
  void run(const CrbmParams& params, int n_steps);

  void set_clamp(const Eigen::MatrixXd& values,
                 const Eigen::Matrix<uint8_t, Eigen::Dynamic, Eigen::Dynamic>& mask);
  void clear_clamp();
  /// Re-initialize visible states (clamped entries overwritten by the clamp).
  void set_visible(const Eigen::MatrixXd& v);
  void set_sigma_beta(double sigma);

  const Eigen::MatrixXd& visible() const { return v_; }
  const Eigen::MatrixXd& hidden() const { return h_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  int n_chains() const { return static_cast<int>(v_.cols()); }
  Rng& rng() { return rng_; }

 private:
  Eigen::MatrixXd v_, h_;
  Eigen::MatrixXd clamp_values_;
  Eigen::Matrix<uint8_t, Eigen::Dynamic, Eigen::Dynamic> clamp_mask_;
  bool clamped_ = false;
  std::vector<BetaProcess> proc_;
  Eigen::VectorXd beta_;
  Rng rng_;
};

/// Per-step sigma_beta values: constant at `sigma_beta` and then decreasing
/// linearly to end exactly at 0 over the final `anneal_steps`.
struct AnnealSchedule {
  int n_steps = 100;
  int anneal_steps = 50;
  double sigma_beta = 0.15;

  double sigma_at(int step) const;  // step in [0, n_steps)
};

/// Run a chain set through the schedule; the final sweep targets beta = 1.
void run_annealed(ChainSet& chains, const CrbmParams& params,
                  const AnnealSchedule& schedule);

}  // namespace crbm::sampling
