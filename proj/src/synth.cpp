#include "crbm/synth.hpp"

#include <algorithm>
#include <cmath>

#include "crbm/math_util.hpp"
#include "crbm/rng.hpp"

namespace crbm::cohort {

namespace {

struct KfssLink {
  const char* name;
  int max;
  double offset;
};

constexpr KfssLink kKfss[] = {
    {"kfss_bowel_bladder", 6, -0.45}, {"kfss_brain_stem", 5, -0.55},
    {"kfss_cerebellar", 5, -0.20},    {"kfss_mental", 5, -0.60},
    {"kfss_pyramidal", 6, 0.05},      {"kfss_sensory", 6, -0.10},
    {"kfss_visual", 6, -0.40},
};

}  // namespace

CohortSchema synth_schema() {
  CohortSchema s;
  s.visit_interval_months = 3;
  s.max_visits = 20;
  auto add = [&](VariableSpec v) { s.variables.push_back(std::move(v)); };

  VariableSpec age;
  age.name = "age";
  age.kind = VarKind::continuous;
  age.lo = 18.0;
  age.hi = 80.0;
  age.transform = Transform::standardize;
  add(age);

  VariableSpec sex;
  sex.name = "sex";
  sex.kind = VarKind::binary;
  add(sex);

  VariableSpec ms;
  ms.name = "ms_type";
  ms.kind = VarKind::categorical;
  ms.labels = {"RRMS", "SPMS", "PPMS"};
  add(ms);

  VariableSpec flag;
  flag.name = "baseline_flag";
  flag.kind = VarKind::binary;
  flag.longitudinal = true;
  flag.baseline_indicator = true;
  add(flag);

  VariableSpec rel;
  rel.name = "relapse";
  rel.kind = VarKind::binary;
  rel.longitudinal = true;
  add(rel);

  for (const auto& k : kKfss) {
    VariableSpec v;
    v.name = k.name;
    v.kind = VarKind::ordinal;
    v.ordinal_max = k.max;
    v.longitudinal = true;
    v.transform = Transform::scale_by_reciprocal_max;
    add(v);
  }

  VariableSpec amb;
  amb.name = "ambulation";
  amb.kind = VarKind::ordinal;
  amb.ordinal_max = 11;
  amb.longitudinal = true;
  amb.transform = Transform::scale_by_reciprocal_max;
  add(amb);

  VariableSpec walk;
  walk.name = "t25fw";
  walk.kind = VarKind::continuous;
  walk.lo = 2.0;
  walk.hi = 300.0;
  walk.longitudinal = true;
  walk.transform = Transform::logit_range;
  add(walk);

  VariableSpec pasat;
  pasat.name = "pasat";
  pasat.kind = VarKind::continuous;
  pasat.lo = 0.0;
  pasat.hi = 60.0;
  pasat.longitudinal = true;
  pasat.transform = Transform::logit_range;
  pasat.round_inverse = true;
  add(pasat);

  s.validate();
  return s;
}

double ar2_stationary_variance(double phi1, double phi2, double noise) {
  const double denom =
      1.0 - phi1 * phi1 - phi2 * phi2 - 2.0 * phi1 * phi1 * phi2 / (1.0 - phi2);
  return noise * noise / denom;
}

std::vector<double> simulate_ar2(double phi1, double phi2, double noise, int n,
                                 uint64_t seed) {
  Rng rng(seed);
  const int burn = 200;
  double prev1 = 0.0, prev2 = 0.0;
  std::vector<double> out;
  out.reserve(n);
  for (int t = 0; t < burn + n; ++t) {
    const double x = phi1 * prev1 + phi2 * prev2 + noise * rng.normal();
    prev2 = prev1;
    prev1 = x;
    if (t >= burn) out.push_back(x);
  }
  return out;
}

namespace {

struct SubjectLatents {
  double age = 45.0;
  int sex = 0;
  int ms_type = 0;
  double base = 0.0;
  double relapse_propensity = 0.0;
  double drift = 0.0;
};

SubjectLatents draw_latents(const SynthConfig& cfg, Rng& rng) {
  SubjectLatents s;
  s.age = std::clamp(rng.normal(45.0, 10.0), 18.0, 80.0);
  s.sex = rng.bernoulli(0.5) ? 1 : 0;
  const double u = rng.uniform();
  s.ms_type = u < 0.60 ? 0 : (u < 0.82 ? 1 : 2);
  static const double type_shift[3] = {-0.15, 0.25, 0.35};
  s.base = 0.35 * (s.age - 45.0) / 10.0 + type_shift[s.ms_type] +
           0.10 * (s.sex - 0.5) + 0.5 * rng.normal();
  s.relapse_propensity = (s.ms_type == 0 ? 0.7 : 0.0) + 0.4 * rng.normal();
  s.drift = s.ms_type == 1 ? cfg.drift_spms : (s.ms_type == 2 ? cfg.drift_ppms : 0.0);
  return s;
}

/// One complete trajectory; masking is applied afterwards.
SubjectRecord draw_trajectory(const CohortSchema& schema, const SynthConfig& cfg,
                              const SubjectLatents& sub, int n_visits, Rng& rng) {
  SubjectRecord rec;
  rec.statics = MaskedRow(schema.n_variables());
  rec.statics.set(schema.index_of("age"), sub.age);
  rec.statics.set(schema.index_of("sex"), sub.sex);
  rec.statics.set(schema.index_of("ms_type"), sub.ms_type);

  const double nu = cfg.obs_noise;
  double s_prev1 = 0.0, s_prev2 = 0.0;
  for (int t = 0; t < 60; ++t) {  // burn-in to stationarity
    const double s = cfg.ar_phi1 * s_prev1 + cfg.ar_phi2 * s_prev2 +
                     cfg.ar_noise * rng.normal();
    s_prev2 = s_prev1;
    s_prev1 = s;
  }
  double s_lag = s_prev1;
  for (int t = 0; t < n_visits; ++t) {
    const double s = cfg.ar_phi1 * s_prev1 + cfg.ar_phi2 * s_prev2 +
                     cfg.ar_noise * rng.normal();
    s_prev2 = s_prev1;
    s_prev1 = s;
    const double d = sub.base + sub.drift * t + s;

    MaskedRow row(schema.n_variables());
    row.set(schema.index_of("baseline_flag"), t == 0 ? 1.0 : 0.0);

    const double jump = std::max(0.0, s - s_lag);
    const double p_rel = math::logistic(-2.0 + 0.6 * sub.relapse_propensity +
                                        0.9 * jump + 0.2 * nu * rng.normal());
    row.set(schema.index_of("relapse"), rng.bernoulli(p_rel) ? 1.0 : 0.0);
    s_lag = s;

    for (const auto& k : kKfss) {
      const double arg = 0.8 * (0.75 * d + nu * rng.normal()) + k.offset;
      const double level = std::floor(k.max * math::logistic(arg) + 0.5);
      row.set(schema.index_of(k.name), std::clamp(level, 0.0, double(k.max)));
    }
    {
      const double arg = 0.6 * d + 0.45 * rng.normal() - 0.9;
      const double level = std::floor(11.0 * math::logistic(arg) + 0.5);
      row.set(schema.index_of("ambulation"), std::clamp(level, 0.0, 11.0));
    }
    {
      const double arg = 0.9 * d + 0.5 * rng.normal() - 2.2;
      row.set(schema.index_of("t25fw"), 2.0 + 298.0 * math::logistic(arg));
    }
    {
      const double arg = -0.55 * d + 0.5 * rng.normal() + 0.6;
      row.set(schema.index_of("pasat"),
              std::clamp(std::floor(60.0 * math::logistic(arg) + 0.5), 0.0, 60.0));
    }
    rec.visits[t * schema.visit_interval_months] = std::move(row);
  }
  return rec;
}

void apply_missingness(SubjectRecord& rec, const CohortSchema& schema,
                       const SynthConfig& cfg, Rng& rng) {
  const int indicator = schema.baseline_indicator_index();
  for (auto& [month, row] : rec.visits) {
    for (int v = 0; v < schema.n_variables(); ++v) {
      if (!schema.variables[v].longitudinal || v == indicator) continue;
      if (rng.bernoulli(cfg.missing_rate)) row.clear(v);
    }
  }
  for (int v = 0; v < schema.n_variables(); ++v) {
    if (schema.variables[v].longitudinal) continue;
    if (cfg.static_missing_rate > 0.0 && rng.bernoulli(cfg.static_missing_rate)) {
      rec.statics.clear(v);
    }
  }
}

}  // namespace

std::vector<SubjectRecord> synth_cohort(const SynthConfig& config, uint64_t seed) {
  const CohortSchema schema = synth_schema();
  std::vector<SubjectRecord> out;
  out.reserve(config.n_subjects);
  for (int i = 0; i < config.n_subjects; ++i) {
    Rng rng(derive_seed(seed, 0xC0F0ULL, i));
    const SubjectLatents sub = draw_latents(config, rng);
    const int n_visits =
        config.min_visits +
        static_cast<int>(rng.below(config.max_visits - config.min_visits + 1));
    SubjectRecord rec = draw_trajectory(schema, config, sub, n_visits, rng);
    rec.subject_id = "SYN" + std::to_string(i + 1);
    apply_missingness(rec, schema, config, rng);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<std::vector<SubjectRecord>> synth_fresh_twins(
    const std::vector<SubjectRecord>& subjects, int k_twins,
    const SynthConfig& config, uint64_t seed) {
  const CohortSchema schema = synth_schema();
  std::vector<std::vector<SubjectRecord>> out(subjects.size());
  for (size_t i = 0; i < subjects.size(); ++i) {
    const int n_visits =
        subjects[i].duration_months() / schema.visit_interval_months + 1;
    out[i].reserve(k_twins);
    for (int k = 0; k < k_twins; ++k) {
      Rng rng(derive_seed(seed, 0x7311ULL, i, k));
      const SubjectLatents sub = draw_latents(config, rng);
      SubjectRecord rec = draw_trajectory(schema, config, sub, n_visits, rng);
      rec.subject_id = subjects[i].subject_id + "-null" + std::to_string(k);
      out[i].push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace crbm::cohort
