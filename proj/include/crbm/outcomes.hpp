#pragma once

#include <optional>
#include <string>

#include "crbm/cdw.hpp"
#include "crbm/metrics_common.hpp"

namespace crbm::metrics {

/// Rank-based AUC with half credit for ties. Undefined for single-class labels.
std::optional<double> auc(const std::vector<double>& scores,
                          const std::vector<int>& labels);

/// AUC of twin relapse fractions against observed relapse at a visit.
/// Score_i = fraction of subject i's K twins with a relapse at that month.
std::optional<double> relapse_auc(const sampling::TwinSet& twins,
                                  const std::string& relapse_variable, int month,
                                  int k_limit = 0);

/// Agreement t statistic for 18-month EDSS change:
/// |mean_i(s_i - mean_k s_ik)| / sd_pop(s_data) * sqrt(n).
std::optional<double> t_edss(const sampling::TwinSet& twins,
                             const ms::KfssRuleTable& table, int k_twins = 10);

/// Optional population filter for CDW metrics (e.g. the PPMS stratum).
struct StratumFilter {
  int variable = -1;
  double value = 0.0;
  bool active() const { return variable >= 0; }
};

/// Same t statistic on binary CDW labels; only subjects whose data label is
/// computable (and passing the filter) enter, and each subject's twin mean is
/// taken over its computable twins.
std::optional<double> t_cdw(const sampling::TwinSet& twins,
                            const ms::KfssRuleTable& table, ms::CdwVariant variant,
                            const StratumFilter& filter, int k_twins = 10);

}  // namespace crbm::metrics
