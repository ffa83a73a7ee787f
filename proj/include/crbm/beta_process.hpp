#pragma once

#include "crbm/rng.hpp"

namespace crbm::sampling {

/// Autoregressive gamma process for the inverse temperature: stationary law
/// Gamma(1/sigma^2, sigma^2) (mean 1, std sigma), lag-1 autocorrelation phi.
/// Transition: z ~ Poisson(phi * beta / ((1 - phi) sigma^2)), then
/// beta' ~ Gamma(1/sigma^2 + z, (1 - phi) sigma^2). sigma = 0 pins beta at 1.
class BetaProcess {
 public:
  BetaProcess() = default;
  BetaProcess(double sigma_beta, double autocorr);

  /// Draw the initial state from the stationary law.
  void reset(Rng& rng);
  /// Advance one step and return the new beta.
  double next(Rng& rng);

  double state() const { return state_; }
  double sigma_beta() const { return sigma_; }
  double autocorr() const { return phi_; }
  /// Change the stationary std (annealing); keeps the current state.
  void set_sigma_beta(double sigma);

 private:
  double sigma_ = 0.0;
  double phi_ = 0.0;
  double state_ = 1.0;
};

}  // namespace crbm::sampling
