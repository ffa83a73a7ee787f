#include "crbm/outcomes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crbm::metrics {

std::optional<double> auc(const std::vector<double>& scores,
                          const std::vector<int>& labels) {
  const size_t n = scores.size();
  if (labels.size() != n) throw DataError("auc: size mismatch");
  long n_pos = 0;
  for (int l : labels) n_pos += l;
  const long n_neg = static_cast<long>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;

  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Average ranks across ties, then the Mann-Whitney identity.
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (size_t k = i; k <= j; ++k) {
      if (labels[idx[k]] == 1) rank_sum_pos += avg_rank;
    }
    i = j + 1;
  }
  const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * (n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::optional<double> relapse_auc(const sampling::TwinSet& twins,
                                  const std::string& relapse_variable, int month,
                                  int k_limit) {
  const int var = twins.schema.index_of(relapse_variable);
  if (var < 0) throw ConfigError("relapse_auc: unknown variable " + relapse_variable);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int i = 0; i < twins.n_subjects(); ++i) {
    const auto it = twins.subjects[i].visits.find(month);
    if (it == twins.subjects[i].visits.end() || !it->second.is_observed(var)) {
      continue;
    }
    const int k_max = k_limit > 0
                          ? std::min<int>(k_limit, twins.twins[i].size())
                          : static_cast<int>(twins.twins[i].size());
    double frac = 0.0;
    int k_used = 0;
    for (int k = 0; k < k_max; ++k) {
      const auto tw = twins.twins[i][k].visits.find(month);
      if (tw == twins.twins[i][k].visits.end() || !tw->second.is_observed(var)) {
        continue;
      }
      frac += tw->second.values[var];
      ++k_used;
    }
    if (k_used == 0) continue;
    scores.push_back(frac / k_used);
    labels.push_back(it->second.values[var] >= 0.5 ? 1 : 0);
  }
  if (scores.size() < 2) return std::nullopt;
  return auc(scores, labels);
}

namespace {

/// |mean(diff)| / sd_pop(data values) * sqrt(n).
std::optional<double> agreement_t(const std::vector<double>& data_values,
                                  const std::vector<double>& twin_means) {
  const size_t n = data_values.size();
  if (n == 0) return std::nullopt;
  double mean_diff = 0.0, mean_data = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_diff += data_values[i] - twin_means[i];
    mean_data += data_values[i];
  }
  mean_diff /= static_cast<double>(n);
  mean_data /= static_cast<double>(n);
  double var = 0.0;
  for (double s : data_values) var += (s - mean_data) * (s - mean_data);
  var /= static_cast<double>(n);
  if (var <= 0.0) return std::nullopt;
  return std::abs(mean_diff) / std::sqrt(var) * std::sqrt(static_cast<double>(n));
}

}  // namespace

std::optional<double> t_edss(const sampling::TwinSet& twins,
                             const ms::KfssRuleTable& table, int k_twins) {
  std::vector<double> data_changes, twin_means;
  for (int i = 0; i < twins.n_subjects(); ++i) {
    const auto data_traj = ms::edss_trajectory(twins.subjects[i], twins.schema, table);
    const auto change = ms::edss_change_18m(data_traj);
    if (!change) continue;
    const int k_max = std::min<int>(k_twins, twins.twins[i].size());
    double sum = 0.0;
    int used = 0;
    for (int k = 0; k < k_max; ++k) {
      const auto tw_traj = ms::edss_trajectory(twins.twins[i][k], twins.schema, table);
      const auto tw_change = ms::edss_change_18m(tw_traj);
      if (tw_change) {
        sum += *tw_change;
        ++used;
      }
    }
    if (used == 0) continue;
    data_changes.push_back(*change);
    twin_means.push_back(sum / used);
  }
  return agreement_t(data_changes, twin_means);
}

std::optional<double> t_cdw(const sampling::TwinSet& twins,
                            const ms::KfssRuleTable& table, ms::CdwVariant variant,
                            const StratumFilter& filter, int k_twins) {
  std::vector<double> data_labels, twin_means;
  for (int i = 0; i < twins.n_subjects(); ++i) {
    const auto& subject = twins.subjects[i];
    if (filter.active()) {
      if (!subject.statics.is_observed(filter.variable) ||
          subject.statics.values[filter.variable] != filter.value) {
        continue;
      }
    }
    const auto data_traj = ms::edss_trajectory(subject, twins.schema, table);
    const auto label = ms::cdw_label(data_traj, variant,
                                     twins.schema.visit_interval_months);
    if (!label.computable) continue;
    const int k_max = std::min<int>(k_twins, twins.twins[i].size());
    double sum = 0.0;
    int used = 0;
    for (int k = 0; k < k_max; ++k) {
      const auto tw_traj = ms::edss_trajectory(twins.twins[i][k], twins.schema, table);
      const auto tw = ms::cdw_label(tw_traj, variant,
                                    twins.schema.visit_interval_months);
      if (tw.computable) {
        sum += tw.value ? 1.0 : 0.0;
        ++used;
      }
    }
    if (used == 0) continue;
    data_labels.push_back(label.value ? 1.0 : 0.0);
    twin_means.push_back(sum / used);
  }
  return agreement_t(data_labels, twin_means);
}

}  // namespace crbm::metrics
