#include "crbm/gibbs.hpp"

namespace crbm::sampling {

ChainSet::ChainSet(const CrbmParams& params, int n_chains, const BetaProcess& proc,
                   uint64_t seed)
    : proc_(n_chains, proc), rng_(seed) {
  if (n_chains <= 0) throw ConfigError("ChainSet: need at least one chain");
  v_.setZero(params.n_visible(), n_chains);
  h_.setZero(params.n_hidden, n_chains);
  beta_.setOnes(n_chains);
  // Start visible states at the bias means, hidden by one conditional draw.
  const Eigen::VectorXd means = bias_means(params);
  for (int c = 0; c < n_chains; ++c) {
    proc_[c].reset(rng_);
    beta_[c] = proc_[c].state();
    v_.col(c) = means;
  }
  const Eigen::MatrixXd psi = hidden_pre(params, v_);
  sample_hidden(params, psi, &beta_, rng_, &h_);
}

void ChainSet::step(const CrbmParams& params) {
  for (size_t c = 0; c < proc_.size(); ++c) {
    beta_[static_cast<int>(c)] = proc_[c].next(rng_);
  }
  const Eigen::MatrixXd psi = hidden_pre(params, v_);
  sample_hidden(params, psi, &beta_, rng_, &h_);
  const Eigen::MatrixXd coupling = visible_coupling(params, h_);
  ClampRef clamp;
  if (clamped_) {
    clamp.values = &clamp_values_;
    clamp.mask = &clamp_mask_;
  }
  sample_visible(params, coupling, &beta_, clamp, rng_, &v_);
}

void ChainSet::run(const CrbmParams& params, int n_steps) {
  for (int i = 0; i < n_steps; ++i) step(params);
}

void ChainSet::set_clamp(
    const Eigen::MatrixXd& values,
    const Eigen::Matrix<uint8_t, Eigen::Dynamic, Eigen::Dynamic>& mask) {
  if (values.rows() != v_.rows() || values.cols() != v_.cols() ||
      mask.rows() != v_.rows() || mask.cols() != v_.cols()) {
    throw DataError("clamp shape mismatch");
  }
  clamp_values_ = values;
  clamp_mask_ = mask;
  clamped_ = true;
  for (int c = 0; c < v_.cols(); ++c) {
    for (int j = 0; j < v_.rows(); ++j) {
      if (clamp_mask_(j, c) != 0) v_(j, c) = clamp_values_(j, c);
    }
  }
}

void ChainSet::clear_clamp() { clamped_ = false; }

void ChainSet::set_visible(const Eigen::MatrixXd& v) {
  if (v.rows() != v_.rows() || v.cols() != v_.cols()) {
    throw DataError("set_visible shape mismatch");
  }
  v_ = v;
  if (clamped_) {
    for (int c = 0; c < v_.cols(); ++c) {
      for (int j = 0; j < v_.rows(); ++j) {
        if (clamp_mask_(j, c) != 0) v_(j, c) = clamp_values_(j, c);
      }
    }
  }
}

void ChainSet::set_sigma_beta(double sigma) {
  for (auto& p : proc_) p.set_sigma_beta(sigma);
}

double AnnealSchedule::sigma_at(int step) const {
  if (anneal_steps <= 0) return step == n_steps - 1 ? 0.0 : sigma_beta;
  const int start = n_steps - anneal_steps;
  if (step < start) return sigma_beta;
  // Last step reaches 0 exactly.
  const double frac =
      static_cast<double>(step - start + 1) / static_cast<double>(anneal_steps);
  return sigma_beta * (1.0 - frac);
}

void run_annealed(ChainSet& chains, const CrbmParams& params,
                  const AnnealSchedule& schedule) {
  for (int s = 0; s < schedule.n_steps; ++s) {
    chains.set_sigma_beta(schedule.sigma_at(s));
    chains.step(params);
  }
}

}  // namespace crbm::sampling
