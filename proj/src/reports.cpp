#include "crbm/reports.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "crbm/tidy.hpp"
#include "json.hpp"

namespace crbm::io {

namespace fs = std::filesystem;
using nlohmann::json;

EvaluationBundle evaluate_twinset(const sampling::TwinSet& twins,
                                  const EvaluateSettings& settings, uint64_t seed) {
  EvaluationBundle out;
  const auto& schema = twins.schema;
  const std::vector<int> vars = metrics::metric_variables(schema);
  const int grid = metrics::grid_size(twins.subjects, schema);
  const auto data = metrics::data_matrices(twins, vars, grid);
  const auto twin = metrics::twin_matrices(twins, vars, grid);

  out.data_moments = metrics::moments_per_visit(data);
  out.twin_moments = metrics::moments_per_visit(twin);

  // Theil-Sen agreement of per-(variable, visit) moments, baseline excluded.
  std::vector<double> mx, my, sx, sy;
  for (int a = 0; a < static_cast<int>(vars.size()); ++a) {
    for (int t = 1; t < grid; ++t) {
      if (out.data_moments.defined(a, t) != 0 && out.twin_moments.defined(a, t) != 0) {
        mx.push_back(out.twin_moments.mean(a, t));
        my.push_back(out.data_moments.mean(a, t));
        sx.push_back(out.twin_moments.std(a, t));
        sy.push_back(out.data_moments.std(a, t));
      }
    }
  }
  out.mean_fit = metrics::theil_sen(mx, my);
  out.std_fit = metrics::theil_sen(sx, sy);

  for (int lag = 0; lag < 4; ++lag) {
    const auto cd = metrics::lag_autocov(data, lag, /*min_t=*/1);
    const auto ct = metrics::lag_autocov(twin, lag, /*min_t=*/1);
    out.r2[lag] = metrics::autocov_r2(cd, ct);
    const auto rho_d = metrics::to_autocorrelation(cd);
    const auto rho_t = metrics::to_autocorrelation(ct);
    std::vector<double> x, y, w;
    const int p = static_cast<int>(vars.size());
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        if (rho_d.defined(a, b) != 0 && rho_t.defined(a, b) != 0) {
          x.push_back(rho_t.c(a, b));
          y.push_back(rho_d.c(a, b));
          w.push_back(cd.weight(a, b));
        }
      }
    }
    const auto fit = metrics::weighted_ls(x, y, w);
    if (fit) out.rho_fit[lag] = *fit;
  }

  out.phi = metrics::phi_calibration(twins, settings.phi);
  out.adversary =
      metrics::adversary_scan(twins, settings.adversary, derive_seed(seed, 0xAD));

  // Selection-style metric report (K = k_metrics twins).
  metrics::MetricReport& rep = out.metric_report;
  for (int lag = 0; lag < 4; ++lag) rep.r2[lag] = out.r2[lag];
  for (int month = 3; month <= 18; month += schema.visit_interval_months) {
    rep.relapse_auc[month] = metrics::relapse_auc(twins, settings.relapse_variable,
                                                  month, settings.k_metrics);
  }
  const auto table = ms::KfssRuleTable::default_table();
  rep.t_edss = metrics::t_edss(twins, table, settings.k_metrics);
  metrics::StratumFilter ppms;
  const int stratum_var = schema.index_of(settings.stratum_variable);
  if (stratum_var >= 0 &&
      schema.variables[stratum_var].kind == cohort::VarKind::categorical) {
    const auto& labels = schema.variables[stratum_var].labels;
    for (size_t l = 0; l < labels.size(); ++l) {
      if (labels[l] == settings.stratum_label) {
        ppms.variable = stratum_var;
        ppms.value = static_cast<double>(l);
      }
    }
  }
  rep.t_cdw[0] =
      metrics::t_cdw(twins, table, ms::CdwVariant::a, ppms, settings.k_metrics);
  rep.t_cdw[1] =
      metrics::t_cdw(twins, table, ms::CdwVariant::b, {}, settings.k_metrics);
  rep.t_cdw[2] =
      metrics::t_cdw(twins, table, ms::CdwVariant::c, {}, settings.k_metrics);
  return out;
}

namespace {

json opt_json(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

}  // namespace

void write_evaluation_reports(const std::string& out_dir,
                              const sampling::TwinSet& twins,
                              const EvaluationBundle& bundle) {
  fs::create_directories(out_dir);
  const auto& schema = twins.schema;
  const std::vector<int> vars = metrics::metric_variables(schema);
  const int step = schema.visit_interval_months;

  {
    std::ofstream out(fs::path(out_dir) / "moments.csv");
    out << "variable,month,n_data,data_mean,twin_mean,data_std,twin_std\n";
    for (size_t a = 0; a < vars.size(); ++a) {
      for (int t = 0; t < bundle.data_moments.mean.cols(); ++t) {
        if (bundle.data_moments.defined(a, t) == 0) continue;
        out << schema.variables[vars[a]].name << ',' << t * step << ','
            << bundle.data_moments.count(a, t) << ','
            << cohort::format_double(bundle.data_moments.mean(a, t)) << ','
            << cohort::format_double(bundle.twin_moments.defined(a, t)
                                         ? bundle.twin_moments.mean(a, t)
                                         : std::nan(""))
            << ',' << cohort::format_double(bundle.data_moments.std(a, t)) << ','
            << cohort::format_double(bundle.twin_moments.defined(a, t)
                                         ? bundle.twin_moments.std(a, t)
                                         : std::nan(""))
            << '\n';
      }
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "phi.csv");
    out << "variable,month,n,mean_phi,var_phi,ks_distance,ks_pvalue,flagged\n";
    for (const auto& cell : bundle.phi) {
      out << schema.variables[cell.variable].name << ',' << cell.month << ','
          << cell.n_subjects << ',' << cohort::format_double(cell.mean_phi) << ','
          << cohort::format_double(cell.var_phi) << ','
          << cohort::format_double(cell.ks_distance) << ','
          << cohort::format_double(cell.ks_pvalue) << ',' << (cell.flagged ? 1 : 0)
          << '\n';
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "adversary.csv");
    out << "month,features,mean_auc,std_auc,n_subjects,n_sims,skipped\n";
    for (const auto& r : bundle.adversary) {
      out << r.month << ','
          << (r.features == metrics::AdversaryFeatures::visit_values ? "values"
                                                                     : "differences")
          << ',' << cohort::format_double(r.mean_auc) << ','
          << cohort::format_double(r.std_auc) << ',' << r.n_subjects << ','
          << r.n_sims << ',' << (r.skipped ? 1 : 0) << '\n';
    }
  }

  json summary;
  summary["n_subjects"] = twins.n_subjects();
  summary["k_twins"] = twins.k_twins();
  for (int lag = 0; lag < 4; ++lag) {
    summary["r2"]["lag" + std::to_string(lag)] = opt_json(bundle.r2[lag]);
    if (bundle.rho_fit[lag]) {
      summary["rho_fit"]["lag" + std::to_string(lag)] = {
          {"alpha", bundle.rho_fit[lag]->alpha},
          {"beta", bundle.rho_fit[lag]->beta},
          {"r2", bundle.rho_fit[lag]->r2}};
    }
  }
  if (bundle.mean_fit) {
    summary["theil_sen_means"] = {{"slope", bundle.mean_fit->slope},
                                  {"intercept", bundle.mean_fit->intercept}};
  }
  if (bundle.std_fit) {
    summary["theil_sen_stds"] = {{"slope", bundle.std_fit->slope},
                                 {"intercept", bundle.std_fit->intercept}};
  }
  {
    int flagged = 0;
    for (const auto& c : bundle.phi) flagged += c.flagged ? 1 : 0;
    summary["phi"]["cells"] = bundle.phi.size();
    summary["phi"]["flagged"] = flagged;
  }
  {
    double worst = 0.0;
    for (const auto& r : bundle.adversary) {
      if (!r.skipped) worst = std::max(worst, r.mean_auc);
    }
    summary["adversary"]["worst_mean_auc"] = worst;
  }
  summary["metric_report"]["t_edss"] = opt_json(bundle.metric_report.t_edss);
  for (int v = 0; v < 3; ++v) {
    summary["metric_report"][std::string("t_cdw_") + char('a' + v)] =
        opt_json(bundle.metric_report.t_cdw[v]);
  }
  for (const auto& [m, v] : bundle.metric_report.relapse_auc) {
    summary["metric_report"]["relapse_auc"][std::to_string(m)] = opt_json(v);
  }
  std::ofstream out(fs::path(out_dir) / "summary.json");
  out << summary.dump(2) << '\n';
}

}  // namespace crbm::io
