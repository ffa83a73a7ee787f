#pragma once

#include "crbm/edss.hpp"

namespace crbm::ms {

/// Confirmed disability worsening definitions: a sustained EDSS increase of
/// at least 1.0 point over baseline (0.5 if baseline EDSS > 6) held across a
/// confirmation window whose start lies within the variant's horizon.
enum class CdwVariant {
  a,  // 6-month window starting within 1 year
  b,  // 3-month window starting within 2 years
  c,  // 6-month window starting within 2 years
};

struct CdwLabel {
  CdwVariant variant = CdwVariant::a;
  bool computable = false;
  bool value = false;  // defined only when computable
};

int cdw_window_months(CdwVariant v);
int cdw_horizon_months(CdwVariant v);

/// Window semantics on the 3-month grid: a window [w, w+len] proves the label
/// true when its endpoints and every interior grid visit are observed at or
/// above the threshold; an observed visit below threshold refutes that
/// window. The label is false only when every candidate window is refuted;
/// otherwise (coverage cannot decide) it is non-computable.
CdwLabel cdw_label(const EdssTrajectory& traj, CdwVariant variant,
                   int visit_interval_months = 3);

}  // namespace crbm::ms
