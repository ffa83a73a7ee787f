#pragma once

#include <vector>

#include "crbm/metrics_common.hpp"

namespace crbm::metrics {

/// Per-subject tail-area calibration: p = 1 - (1/K) sum_k [x_data <= x_twin_k]
/// (mid-p splits ties in half), phi = Phi^{-1}(p) after clipping p to
/// [1/(2K), 1 - 1/(2K)]. A well-calibrated model gives phi ~ N(0, 1).
struct PhiCell {
  int variable = -1;  // schema index
  int month = 0;
  int n_subjects = 0;
  double mean_phi = 0.0;
  double var_phi = 0.0;
  double ks_distance = 0.0;
  double ks_pvalue = 1.0;
  bool flagged = false;  // significant at the Bonferroni-corrected level
};

struct PhiConfig {
  bool mid_p = false;      // half credit for twin values tied with the data
  int min_subjects = 20;   // cells with fewer observed subjects are skipped
  double alpha = 0.05;
  int n_tests = 0;         // Bonferroni divisor; 0 = number of emitted cells
  int min_month = 3;       // baseline excluded by default
};

/// Cells for every (variable, visit) over non-binary longitudinal variables.
/// The KS screen compares N(mean_phi, var_phi) to N(0, 1) at significance
/// alpha / n_tests.
std::vector<PhiCell> phi_calibration(const sampling::TwinSet& twins,
                                     const PhiConfig& config);

}  // namespace crbm::metrics
