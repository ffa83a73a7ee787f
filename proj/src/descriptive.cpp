#include "crbm/descriptive.hpp"

#include <algorithm>
#include <cmath>

namespace crbm::metrics {

namespace {

double median_inplace(std::vector<double>* v) {
  const size_t n = v->size();
  const size_t mid = n / 2;
  std::nth_element(v->begin(), v->begin() + mid, v->end());
  double m = (*v)[mid];
  if (n % 2 == 0) {
    const double lower = *std::max_element(v->begin(), v->begin() + mid);
    m = 0.5 * (m + lower);
  }
  return m;
}

}  // namespace

VisitMoments moments_per_visit(const std::vector<TrajectoryMatrix>& cohort) {
  const int p = cohort.empty() ? 0 : static_cast<int>(cohort[0].values.rows());
  int grid = 0;
  for (const auto& t : cohort) grid = std::max(grid, static_cast<int>(t.values.cols()));
  VisitMoments out;
  out.mean.setZero(p, grid);
  out.std.setZero(p, grid);
  out.count.setZero(p, grid);
  out.defined.setZero(p, grid);
  for (int a = 0; a < p; ++a) {
    for (int t = 0; t < grid; ++t) {
      double sum = 0.0, n = 0.0;
      for (const auto& traj : cohort) {
        if (t < traj.values.cols() && traj.mask(a, t) != 0) {
          sum += traj.values(a, t);
          n += 1.0;
        }
      }
      out.count(a, t) = n;
      if (n < 1.0) continue;
      const double mu = sum / n;
      double ss = 0.0;
      for (const auto& traj : cohort) {
        if (t < traj.values.cols() && traj.mask(a, t) != 0) {
          ss += (traj.values(a, t) - mu) * (traj.values(a, t) - mu);
        }
      }
      out.mean(a, t) = mu;
      out.std(a, t) = std::sqrt(ss / n);
      out.defined(a, t) = 1;
    }
  }
  return out;
}

std::optional<TheilSenFit> theil_sen(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) return std::nullopt;
  std::vector<double> slopes;
  slopes.reserve(n * (n - 1) / 2);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (x[i] != x[j]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
    }
  }
  if (slopes.empty()) return std::nullopt;
  TheilSenFit fit;
  fit.slope = median_inplace(&slopes);
  std::vector<double> residuals(n);
  for (size_t i = 0; i < n; ++i) residuals[i] = y[i] - fit.slope * x[i];
  fit.intercept = median_inplace(&residuals);
  return fit;
}

std::optional<WeightedLsFit> weighted_ls(const std::vector<double>& x,
                                         const std::vector<double>& y,
                                         const std::vector<double>& w) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n || w.size() != n) return std::nullopt;
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (w[i] < 0.0) throw DataError("weighted_ls: negative weight");
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sxx += w[i] * x[i] * x[i];
    sxy += w[i] * x[i] * y[i];
  }
  if (sw <= 0.0) return std::nullopt;
  const double mx = sx / sw, my = sy / sw;
  const double vxx = sxx / sw - mx * mx;
  const double vxy = sxy / sw - mx * my;
  if (vxx <= 0.0) return std::nullopt;
  WeightedLsFit fit;
  fit.beta = vxy / vxx;
  fit.alpha = my - fit.beta * mx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = y[i] - fit.alpha - fit.beta * x[i];
    ss_res += w[i] * e * e;
    ss_tot += w[i] * (y[i] - my) * (y[i] - my);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace crbm::metrics
