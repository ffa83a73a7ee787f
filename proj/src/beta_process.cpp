#include "crbm/beta_process.hpp"

#include "crbm/errors.hpp"

namespace crbm::sampling {

BetaProcess::BetaProcess(double sigma_beta, double autocorr)
    : sigma_(sigma_beta), phi_(autocorr) {
  if (sigma_beta < 0.0) throw ConfigError("sigma_beta must be >= 0");
  if (autocorr < 0.0 || autocorr >= 1.0) throw ConfigError("autocorr must be in [0,1)");
}

void BetaProcess::reset(Rng& rng) {
  if (sigma_ == 0.0) {
    state_ = 1.0;
    return;
  }
  const double s2 = sigma_ * sigma_;
  state_ = rng.gamma(1.0 / s2, s2);
}

double BetaProcess::next(Rng& rng) {
  if (sigma_ == 0.0) {
    state_ = 1.0;
    return state_;
  }
  const double s2 = sigma_ * sigma_;
  if (phi_ == 0.0) {
    state_ = rng.gamma(1.0 / s2, s2);
    return state_;
  }
  const double c = (1.0 - phi_) * s2;
  const int64_t z = rng.poisson(phi_ * state_ / c);
  state_ = rng.gamma(1.0 / s2 + static_cast<double>(z), c);
  return state_;
}

void BetaProcess::set_sigma_beta(double sigma) {
  if (sigma < 0.0) throw ConfigError("sigma_beta must be >= 0");
  sigma_ = sigma;
}

}  // namespace crbm::sampling
