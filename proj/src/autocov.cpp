#include "crbm/autocov.hpp"

#include <cmath>

namespace crbm::metrics {

AutocovResult lag_autocov(const std::vector<TrajectoryMatrix>& cohort, int lag,
                          int min_t) {
  if (lag < 0) throw ConfigError("lag_autocov: lag must be >= 0");
  const int p = cohort.empty() ? 0 : static_cast<int>(cohort[0].values.rows());
  AutocovResult out;
  out.c.setZero(p, p);
  out.defined.setZero(p, p);
  out.weight.setZero(p, p);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      double sa = 0.0, sb = 0.0, n = 0.0;
      for (const auto& traj : cohort) {
        const int grid = static_cast<int>(traj.values.cols());
        for (int t = min_t; t + lag < grid; ++t) {
          if (traj.mask(a, t) != 0 && traj.mask(b, t + lag) != 0) {
            sa += traj.values(a, t);
            sb += traj.values(b, t + lag);
            n += 1.0;
          }
        }
      }
      out.weight(a, b) = n;
      if (n < 2.0) continue;
      const double ma = sa / n, mb = sb / n;
      double cov = 0.0;
      for (const auto& traj : cohort) {
        const int grid = static_cast<int>(traj.values.cols());
        for (int t = min_t; t + lag < grid; ++t) {
          if (traj.mask(a, t) != 0 && traj.mask(b, t + lag) != 0) {
            cov += (traj.values(a, t) - ma) * (traj.values(b, t + lag) - mb);
          }
        }
      }
      out.c(a, b) = cov / n;
      out.defined(a, b) = 1;
    }
  }
  return out;
}

std::optional<double> autocov_r2(const AutocovResult& data,
                                 const AutocovResult& twin) {
  const int p = static_cast<int>(data.c.rows());
  if (twin.c.rows() != p) throw DataError("autocov_r2: shape mismatch");
  double mean_twin = 0.0;
  long n = 0;
  for (int a = 0; a < p; ++a) {
    for (int b = a; b < p; ++b) {
      if (data.defined(a, b) != 0 && twin.defined(a, b) != 0) {
        mean_twin += twin.c(a, b);
        ++n;
      }
    }
  }
  if (n < 2) return std::nullopt;
  mean_twin /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (int a = 0; a < p; ++a) {
    for (int b = a; b < p; ++b) {
      if (data.defined(a, b) != 0 && twin.defined(a, b) != 0) {
        const double d = data.c(a, b) - twin.c(a, b);
        const double s = twin.c(a, b) - mean_twin;
        num += d * d;
        den += s * s;
      }
    }
  }
  if (den <= 0.0) return std::nullopt;
  return 1.0 - num / den;
}

AutocovResult to_autocorrelation(const AutocovResult& in) {
  const int p = static_cast<int>(in.c.rows());
  AutocovResult out;
  out.c.setZero(p, p);
  out.defined.setZero(p, p);
  out.weight = in.weight;
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      if (in.defined(a, b) == 0 || in.defined(a, a) == 0 || in.defined(b, b) == 0) {
        continue;
      }
      const double denom = in.c(a, a) * in.c(b, b);
      if (denom <= 0.0) continue;
      out.c(a, b) = in.c(a, b) / std::sqrt(denom);
      out.defined(a, b) = 1;
    }
  }
  return out;
}

}  // namespace crbm::metrics
