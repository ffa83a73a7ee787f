#include "crbm/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "crbm/math_util.hpp"

namespace crbm::metrics {

std::vector<PhiCell> phi_calibration(const sampling::TwinSet& twins,
                                     const PhiConfig& config) {
  const auto& schema = twins.schema;
  const std::vector<int> variables = metric_variables(schema, /*exclude_binary=*/true);
  const int step = schema.visit_interval_months;
  int longest = 0;
  for (const auto& s : twins.subjects) longest = std::max(longest, s.duration_months());

  std::vector<PhiCell> cells;
  for (int var : variables) {
    for (int month = config.min_month; month <= longest; month += step) {
      std::vector<double> phis;
      for (int i = 0; i < twins.n_subjects(); ++i) {
        const auto it = twins.subjects[i].visits.find(month);
        if (it == twins.subjects[i].visits.end() || !it->second.is_observed(var)) {
          continue;
        }
        const double x = it->second.values[var];
        long n_strictly_above = 0;  // twins strictly greater than the data
        long n_tied = 0;
        long k = 0;
        for (const auto& twin : twins.twins[i]) {
          const auto tw = twin.visits.find(month);
          if (tw == twin.visits.end() || !tw->second.is_observed(var)) continue;
          ++k;
          if (tw->second.values[var] > x) {
            ++n_strictly_above;
          } else if (tw->second.values[var] == x) {
            ++n_tied;
          }
        }
        if (k == 0) continue;
        // delta(x <= twin) counts ties fully; mid-p gives them half credit.
        const double counted =
            n_strictly_above + (config.mid_p ? 0.5 : 1.0) * n_tied;
        double p = 1.0 - counted / static_cast<double>(k);
        const double clip = 1.0 / (2.0 * static_cast<double>(k));
        p = std::clamp(p, clip, 1.0 - clip);
        phis.push_back(math::norm_ppf(p));
      }
      if (static_cast<int>(phis.size()) < config.min_subjects) continue;
      PhiCell cell;
      cell.variable = var;
      cell.month = month;
      cell.n_subjects = static_cast<int>(phis.size());
      double sum = 0.0;
      for (double v : phis) sum += v;
      cell.mean_phi = sum / phis.size();
      double ss = 0.0;
      for (double v : phis) ss += (v - cell.mean_phi) * (v - cell.mean_phi);
      cell.var_phi = ss / phis.size();
      cells.push_back(cell);
    }
  }

  const int n_tests =
      config.n_tests > 0 ? config.n_tests : std::max<int>(1, cells.size());
  for (auto& cell : cells) {
    if (cell.var_phi <= 0.0) {
      cell.ks_distance = 1.0;
      cell.ks_pvalue = 0.0;
      cell.flagged = true;
      continue;
    }
    cell.ks_distance = math::ks_distance_normal_vs_std(cell.mean_phi, cell.var_phi);
    cell.ks_pvalue = math::ks_pvalue(cell.ks_distance, cell.n_subjects);
    cell.flagged = cell.ks_pvalue < config.alpha / n_tests;
  }
  return cells;
}

}  // namespace crbm::metrics
