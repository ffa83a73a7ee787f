#include "crbm/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "crbm/model_io.hpp"
#include "crbm/parallel.hpp"
#include "json.hpp"

namespace crbm::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json report_to_json(const metrics::MetricReport& r) {
  json j;
  j["failed"] = r.failed;
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  j["r2"] = {opt(r.r2[0]), opt(r.r2[1]), opt(r.r2[2]), opt(r.r2[3])};
  j["relapse_auc"] = json::object();
  for (const auto& [m, v] : r.relapse_auc) {
    j["relapse_auc"][std::to_string(m)] = opt(v);
  }
  j["t_edss"] = opt(r.t_edss);
  j["t_cdw"] = {opt(r.t_cdw[0]), opt(r.t_cdw[1]), opt(r.t_cdw[2])};
  return j;
}

metrics::MetricReport report_from_json(const json& j) {
  metrics::MetricReport r;
  r.failed = j.value("failed", false);
  auto opt = [](const json& v) -> std::optional<double> {
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
  };
  for (int l = 0; l < 4; ++l) r.r2[l] = opt(j.at("r2").at(l));
  for (const auto& [key, v] : j.at("relapse_auc").items()) {
    r.relapse_auc[std::stoi(key)] = opt(v);
  }
  r.t_edss = opt(j.at("t_edss"));
  for (int v = 0; v < 3; ++v) r.t_cdw[v] = opt(j.at("t_cdw").at(v));
  return r;
}

json hp_to_json(const train::Hyperparams& hp) {
  json j;
  j["n_hidden"] = hp.n_hidden;
  j["n_epochs"] = hp.n_epochs;
  j["batch_size"] = hp.batch_size;
  j["learning_rate"] = hp.learning_rate;
  j["sigma_beta"] = hp.sigma_beta;
  j["l2_penalty"] = hp.l2_penalty;
  j["adversary_weight"] = hp.adversary_weight;
  j["mc_steps"] = hp.mc_steps;
  j["positive_fill_sweeps"] = hp.positive_fill_sweeps;
  j["critic_trees"] = hp.critic_trees;
  j["critic_depth"] = hp.critic_depth;
  j["lr_decay_to"] = hp.lr_decay_to;
  j["driven_autocorr"] = hp.driven_autocorr;
  j["optimizer"] = hp.optimizer;
  j["n_chains"] = hp.n_chains;
  return j;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw RunError("cannot write " + tmp);
    out << content;
  }
  fs::rename(tmp, path);
}

std::string cell_file(const std::string& out_dir, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "cell_%04d.json", index);
  return (fs::path(out_dir) / "cells" / buf).string();
}

}  // namespace

metrics::MetricReport evaluate_cell(const CrbmParams& params, const SweepInputs& in,
                                    uint64_t seed) {
  metrics::MetricReport report;
  const sampling::TwinSet twins = sampling::generate_twinset(
      params, in.schema, in.norms, in.validation, in.evaluate.k_metrics,
      in.generate, seed, /*n_threads=*/1);

  const std::vector<int> vars = metrics::metric_variables(in.schema);
  const int grid = metrics::grid_size(in.validation, in.schema);
  const auto data = metrics::data_matrices(twins, vars, grid);
  const auto twin = metrics::twin_matrices(twins, vars, grid);
  for (int lag = 0; lag < 4; ++lag) {
    const auto cd = metrics::lag_autocov(data, lag, /*min_t=*/1);
    const auto ct = metrics::lag_autocov(twin, lag, /*min_t=*/1);
    report.r2[lag] = metrics::autocov_r2(cd, ct);
  }
  for (int month = 3; month <= 18; month += in.schema.visit_interval_months) {
    report.relapse_auc[month] = metrics::relapse_auc(
        twins, in.evaluate.relapse_variable, month, in.evaluate.k_metrics);
  }
  const auto table = ms::KfssRuleTable::default_table();
  report.t_edss = metrics::t_edss(twins, table, in.evaluate.k_metrics);
  metrics::StratumFilter ppms;
  const int stratum_var = in.schema.index_of(in.evaluate.stratum_variable);
  if (stratum_var >= 0) {
    const auto& labels = in.schema.variables[stratum_var].labels;
    for (size_t l = 0; l < labels.size(); ++l) {
      if (labels[l] == in.evaluate.stratum_label) {
        ppms.variable = stratum_var;
        ppms.value = static_cast<double>(l);
      }
    }
  }
  report.t_cdw[0] =
      metrics::t_cdw(twins, table, ms::CdwVariant::a, ppms, in.evaluate.k_metrics);
  report.t_cdw[1] =
      metrics::t_cdw(twins, table, ms::CdwVariant::b, {}, in.evaluate.k_metrics);
  report.t_cdw[2] =
      metrics::t_cdw(twins, table, ms::CdwVariant::c, {}, in.evaluate.k_metrics);
  return report;
}

SweepOutcome run_sweep(const SweepInputs& in,
                       const std::vector<train::Hyperparams>& grid,
                       const std::string& out_dir, uint64_t seed, int jobs,
                       bool resume) {
  if (grid.empty()) throw ConfigError("sweep: empty hyperparameter grid");
  fs::create_directories(fs::path(out_dir) / "cells");
  fs::create_directories(fs::path(out_dir) / "models");

  SweepOutcome outcome;
  outcome.cells.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    outcome.cells[i].index = static_cast<int>(i);
    outcome.cells[i].hp = grid[i];
  }

  parallel_for(static_cast<int>(grid.size()), jobs, [&](int i) {
    SweepCell& cell = outcome.cells[i];
    const std::string path = cell_file(out_dir, i);
    if (resume && fs::exists(path)) {
      std::ifstream existing(path);
      json j;
      existing >> j;
      if (j.value("status", "") == "ok" || j.value("status", "") == "failed") {
        cell.status = j.at("status").get<std::string>();
        cell.metrics = report_from_json(j.at("metrics"));
        cell.model_path = j.value("model", "");
        cell.error = j.value("error", "");
        return;  // completed cells never re-run
      }
    }
    const uint64_t cell_seed = derive_seed(seed, 0x57EEULL, i);
    json j;
    j["index"] = i;
    j["hyperparams"] = hp_to_json(cell.hp);
    try {
      const train::TrainResult trained =
          train::train(in.train_triplets, in.layout, cell.hp, cell_seed);
      if (!trained.ok) {
        cell.status = "failed";
        cell.error = trained.failure;
        cell.metrics.failed = true;
      } else {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "model_%04d.crbm", i);
        cell.model_path = (fs::path(out_dir) / "models" / buf).string();
        save_model(cell.model_path, trained.params, in.schema,
                   hp_to_json(cell.hp).dump());
        cell.metrics =
            evaluate_cell(trained.params, in, derive_seed(cell_seed, 0xE7A1ULL));
        cell.status = "ok";
      }
    } catch (const std::exception& e) {
      cell.status = "failed";
      cell.error = e.what();
      cell.metrics.failed = true;
    }
    j["status"] = cell.status;
    j["metrics"] = report_to_json(cell.metrics);
    j["model"] = cell.model_path;
    j["error"] = cell.error;
    atomic_write(path, j.dump(2) + "\n");
  });

  std::vector<metrics::MetricReport> reports;
  reports.reserve(outcome.cells.size());
  for (const auto& c : outcome.cells) reports.push_back(c.metrics);
  outcome.table = metrics::build_metric_table(reports);
  outcome.ranks = metrics::rank_matrix(outcome.table);

  bool any_ok = false;
  for (const auto& c : outcome.cells) any_ok |= c.status == "ok";
  if (!any_ok) {
    std::string detail;
    for (const auto& c : outcome.cells) {
      if (!c.error.empty()) {
        detail = c.error;
        break;
      }
    }
    throw RunError("sweep: every cell failed (" + detail + ")");
  }

  std::vector<int> clinical;
  for (size_t jx = 0; jx < outcome.table.names.size(); ++jx) {
    if (outcome.table.clinical[jx]) clinical.push_back(static_cast<int>(jx));
  }
  if (clinical.empty()) {
    for (size_t jx = 0; jx < outcome.table.names.size(); ++jx) {
      clinical.push_back(static_cast<int>(jx));
    }
  }
  if (outcome.cells.size() >= 4) {
    outcome.selected = metrics::minimax_select(outcome.ranks, clinical);
  } else {
    // Tiny grids: plain minimax over the clinical subset.
    int best = -1, best_rank = 1 << 30;
    for (size_t i = 0; i < outcome.cells.size(); ++i) {
      int sub = 0;
      for (int jx : clinical) sub = std::max(sub, outcome.ranks[i][jx]);
      if (sub < best_rank) {
        best_rank = sub;
        best = static_cast<int>(i);
      }
    }
    outcome.selected = best;
  }
  return outcome;
}

void save_rank_csv(const std::string& path, const metrics::MetricTable& table,
                   const std::vector<std::vector<int>>& ranks) {
  std::ofstream out(path);
  if (!out) throw RunError("cannot write " + path);
  out << "model";
  for (const auto& n : table.names) out << ',' << n << ",rank_" << n;
  out << ",max_rank\n";
  for (size_t i = 0; i < ranks.size(); ++i) {
    out << i;
    int worst = 0;
    for (size_t j = 0; j < table.names.size(); ++j) {
      out << ',';
      if (std::isfinite(table.values[i][j])) out << table.values[i][j];
      out << ',' << ranks[i][j];
      worst = std::max(worst, ranks[i][j]);
    }
    out << ',' << worst << '\n';
  }
}

}  // namespace crbm::io
