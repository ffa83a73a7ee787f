#include "crbm/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace crbm::metrics {

namespace {
constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
}

bool MetricReport::all_finite() const {
  if (failed) return false;
  for (const auto& v : r2) {
    if (!v || !std::isfinite(*v)) return false;
  }
  for (const auto& [m, v] : relapse_auc) {
    if (!v || !std::isfinite(*v)) return false;
  }
  if (!t_edss || !std::isfinite(*t_edss)) return false;
  for (const auto& v : t_cdw) {
    if (!v || !std::isfinite(*v)) return false;
  }
  return true;
}

MetricTable build_metric_table(const std::vector<MetricReport>& reports) {
  MetricTable table;
  // Column layout: R^2 lags; relapse AUC months (union over models); t stats.
  std::set<int> months;
  for (const auto& r : reports) {
    for (const auto& [m, v] : r.relapse_auc) months.insert(m);
  }
  for (int l = 0; l < 4; ++l) {
    table.names.push_back("r2_lag" + std::to_string(l));
    table.higher_is_better.push_back(true);
    table.clinical.push_back(false);
  }
  for (int m : months) {
    table.names.push_back("relapse_auc_m" + std::to_string(m));
    table.higher_is_better.push_back(true);
    table.clinical.push_back(true);
  }
  table.names.push_back("t_edss");
  table.higher_is_better.push_back(false);
  table.clinical.push_back(true);
  for (const char* v : {"t_cdw_a", "t_cdw_b", "t_cdw_c"}) {
    table.names.push_back(v);
    table.higher_is_better.push_back(false);
    table.clinical.push_back(true);
  }

  for (const auto& r : reports) {
    std::vector<double> row;
    auto push = [&](const std::optional<double>& v) {
      row.push_back(!r.failed && v && std::isfinite(*v) ? *v : kUndefined);
    };
    for (int l = 0; l < 4; ++l) push(r.r2[l]);
    for (int m : months) {
      const auto it = r.relapse_auc.find(m);
      push(it == r.relapse_auc.end() ? std::nullopt : it->second);
    }
    push(r.t_edss);
    for (int v = 0; v < 3; ++v) push(r.t_cdw[v]);
    table.values.push_back(std::move(row));
  }

  // Drop metrics undefined for every model.
  std::vector<int> keep;
  for (size_t j = 0; j < table.names.size(); ++j) {
    bool any = false;
    for (const auto& row : table.values) {
      if (std::isfinite(row[j])) {
        any = true;
        break;
      }
    }
    if (any) keep.push_back(static_cast<int>(j));
  }
  if (keep.size() != table.names.size()) {
    MetricTable pruned;
    for (int j : keep) {
      pruned.names.push_back(table.names[j]);
      pruned.higher_is_better.push_back(table.higher_is_better[j]);
      pruned.clinical.push_back(table.clinical[j]);
    }
    for (const auto& row : table.values) {
      std::vector<double> r;
      for (int j : keep) r.push_back(row[j]);
      pruned.values.push_back(std::move(r));
    }
    return pruned;
  }
  return table;
}

std::vector<std::vector<int>> rank_matrix(const MetricTable& table) {
  const int n = static_cast<int>(table.values.size());
  const int j_count = static_cast<int>(table.names.size());
  std::vector<std::vector<int>> ranks(n, std::vector<int>(j_count, 0));
  for (int j = 0; j < j_count; ++j) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const bool hib = table.higher_is_better[j];
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double va = table.values[a][j];
      const double vb = table.values[b][j];
      const bool da = std::isfinite(va), db = std::isfinite(vb);
      if (da != db) return da;          // undefined sorts last
      if (!da) return a < b;            // both undefined: by model id
      if (va != vb) return hib ? va > vb : va < vb;
      return a < b;                     // ties broken by model id
    });
    for (int pos = 0; pos < n; ++pos) ranks[order[pos]][j] = pos + 1;
  }
  return ranks;
}

int minimax_select(const std::vector<std::vector<int>>& ranks,
                   const std::vector<int>& subset_j) {
  const int n = static_cast<int>(ranks.size());
  if (n < 4) throw ConfigError("minimax_select: need at least 4 models");
  if (subset_j.empty()) throw ConfigError("minimax_select: empty metric subset");
  const int j_count = static_cast<int>(ranks[0].size());
  for (int j : subset_j) {
    if (j < 0 || j >= j_count) throw ConfigError("minimax_select: bad subset index");
  }

  std::vector<std::pair<int, int>> worst(n);  // (max rank, model id)
  for (int i = 0; i < n; ++i) {
    worst[i] = {*std::max_element(ranks[i].begin(), ranks[i].end()), i};
  }
  std::sort(worst.begin(), worst.end());
  const int kept = std::max(1, n / 4);

  int best_model = -1;
  int best_rank = std::numeric_limits<int>::max();
  for (int idx = 0; idx < kept; ++idx) {
    const int i = worst[idx].second;
    int sub = 0;
    for (int j : subset_j) sub = std::max(sub, ranks[i][j]);
    if (sub < best_rank || (sub == best_rank && i < best_model)) {
      best_rank = sub;
      best_model = i;
    }
  }
  return best_model;
}

}  // namespace crbm::metrics
