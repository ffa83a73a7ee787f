#include "crbm/math_util.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace crbm::math {

double norm_logcdf(double x) {
  if (x > -1.0) {
    return std::log1p(-0.5 * std::erfc(x * 0.7071067811865475244));
  }
  // Lower tail: erfc underflows near x ~ -38, switch to the asymptotic
  // expansion of Mills' ratio before that.
  if (x > -20.0) {
    return std::log(0.5 * std::erfc(-x * 0.7071067811865475244));
  }
  const double z = -x;
  const double z2 = z * z;
  // log phi(z) + log(1/z - 1/z^3 + 3/z^5 - 15/z^7)
  const double log_pdf = -0.5 * z2 - 0.9189385332046727418;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
  return log_pdf - std::log(z) + std::log(series);
}

double norm_ppf(double p) {
  // Wichura (1988), algorithm AS 241, PPND16.
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw std::domain_error("norm_ppf: p outside [0,1]");
  }
  const double q = p - 0.5;
  double r;
  if (std::abs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) *
                    r +
                4.5921953931549871457e4) *
                   r +
               1.3731693765509461125e4) *
                  r +
              1.9715909503065514427e3) *
                 r +
             1.3314166789178437745e2) *
                r +
            3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) *
                    r +
                2.1213794301586595867e4) *
                   r +
               5.3941960214247511077e3) *
                  r +
              6.8718700749205790830e2) *
                 r +
             4.2313330701600911252e1) *
                r +
            1.0);
  }
  r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) *
                   r +
               1.27045825245236838258e0) *
                  r +
              3.64784832476320460504e0) *
                 r +
             5.76949722146069140550e0) *
                r +
            4.63033784615654529590e0) *
               r +
           1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) *
                   r +
               1.48103976427480074590e-1) *
                  r +
              6.89767334985100004550e-1) *
                 r +
             1.67638483018380384940e0) *
                r +
            2.05319162663775882187e0) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) *
                   r +
               2.65321895265761230930e-2) *
                  r +
              2.96560571828504891230e-1) *
                 r +
             1.78482653991729133580e0) *
                r +
            5.46378491116411436990e0) *
               r +
           6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) *
                   r +
               7.86869131145613259100e-4) *
                  r +
              1.48753612908506148525e-2) *
                 r +
             1.36929880922735805310e-1) *
                r +
            5.99832206555887937690e-1) *
               r +
           1.0);
  }
  return (q < 0.0) ? -val : val;
}

double truncnorm_mean(double mu, double sigma) {
  const double a = mu / sigma;
  // E[h] = mu + sigma * phi(a) / Phi(a); use the log form when Phi underflows.
  const double log_ratio = std::log(norm_pdf(a)) - norm_logcdf(a);
  return mu + sigma * std::exp(log_ratio);
}

double truncnorm_second_moment(double mu, double sigma) {
  const double a = mu / sigma;
  const double log_ratio = std::log(norm_pdf(a)) - norm_logcdf(a);
  const double r = std::exp(log_ratio);
  return mu * mu + sigma * sigma + mu * sigma * r;
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_distance_normal_vs_std(double mu, double var) {
  const double sigma = std::sqrt(var);
  auto gap = [&](double x) {
    return std::abs(norm_cdf((x - mu) / sigma) - norm_cdf(x));
  };
  if (std::abs(sigma - 1.0) < 1e-12) {
    return gap(0.5 * mu);
  }
  // Density crossings of N(mu, sigma^2) and N(0,1) are the roots of
  // (1 - 1/s^2) x^2 + (2 mu / s^2) x - mu^2/s^2 - 2 log s = 0;
  // the CDF gap is extremal exactly there.
  const double s2 = sigma * sigma;
  const double a = 1.0 - 1.0 / s2;
  const double b = 2.0 * mu / s2;
  const double c = -mu * mu / s2 - std::log(s2);
  const double disc = b * b - 4.0 * a * c;
  double best = 0.0;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    best = std::max(gap((-b + sq) / (2.0 * a)), gap((-b - sq) / (2.0 * a)));
  } else {
    best = gap(0.5 * mu);
  }
  return best;
}

double ks_pvalue(double d, double n) {
  const double sn = std::sqrt(n);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

}  // namespace crbm::math
