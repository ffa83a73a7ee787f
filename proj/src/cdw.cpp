#include "crbm/cdw.hpp"

#include <algorithm>
#include <map>

namespace crbm::ms {

int cdw_window_months(CdwVariant v) {
  return v == CdwVariant::b ? 3 : 6;
}

int cdw_horizon_months(CdwVariant v) {
  return v == CdwVariant::a ? 12 : 24;
}

CdwLabel cdw_label(const EdssTrajectory& traj, CdwVariant variant,
                   int visit_interval_months) {
  CdwLabel out;
  out.variant = variant;
  const auto baseline = traj.at(0);
  if (!baseline) return out;  // baseline unobserved: non-computable

  const double threshold = *baseline + (*baseline > 6.0 ? 0.5 : 1.0);
  const int window = cdw_window_months(variant);
  const int horizon = cdw_horizon_months(variant);
  const int step = visit_interval_months;

  std::map<int, double> observed;
  for (size_t i = 0; i < traj.months.size(); ++i) {
    if (traj.observed[i]) observed[traj.months[i]] = traj.edss[i];
  }

  bool all_refuted = true;
  for (int start = step; start <= horizon; start += step) {
    bool refuted = false;
    bool complete = true;
    for (int m = start; m <= start + window; m += step) {
      const auto it = observed.find(m);
      if (it == observed.end()) {
        complete = false;
      } else if (it->second < threshold) {
        refuted = true;
        break;
      }
    }
    if (!refuted && complete) {
      out.computable = true;
      out.value = true;
      return out;
    }
    if (!refuted) all_refuted = false;
  }
  if (all_refuted) {
    out.computable = true;
    out.value = false;
  }
  return out;
}

}  // namespace crbm::ms
