#pragma once

#include <cmath>

namespace crbm::math {

inline double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// log(1 + e^x) without overflow.
inline double log1pexp(double x) {
  if (x > 33.0) return x;
  if (x < -37.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

inline double norm_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

/// log of the standard normal CDF, stable far into the lower tail.
double norm_logcdf(double x);

/// Inverse standard normal CDF (Wichura's PPND16 rational approximation).
double norm_ppf(double p);

/// Mean of a normal(mu, sigma) truncated to [0, inf).
double truncnorm_mean(double mu, double sigma);

/// Second moment E[h^2] of a normal(mu, sigma) truncated to [0, inf).
double truncnorm_second_moment(double mu, double sigma);

/// Survival function of the Kolmogorov distribution, Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda);

/// Two-sided KS distance sup_x |N(mu1,var1).cdf(x) - N(0,1).cdf(x)|.
double ks_distance_normal_vs_std(double mu, double var);

/// KS p-value for comparing a fitted normal against N(0,1) with n observations,
/// using the Stephens small-sample correction of the asymptotic distribution.
double ks_pvalue(double d, double n);

}  // namespace crbm::math
