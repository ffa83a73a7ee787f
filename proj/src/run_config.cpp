#include "crbm/run_config.hpp"

#include <fstream>

#include "json.hpp"

namespace crbm::io {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

cohort::VarKind parse_kind(const std::string& s) {
  if (s == "binary") return cohort::VarKind::binary;
  if (s == "ordinal") return cohort::VarKind::ordinal;
  if (s == "categorical") return cohort::VarKind::categorical;
  if (s == "continuous") return cohort::VarKind::continuous;
  throw ConfigError("unknown variable kind '" + s + "'");
}

std::string kind_name(cohort::VarKind k) {
  switch (k) {
    case cohort::VarKind::binary: return "binary";
    case cohort::VarKind::ordinal: return "ordinal";
    case cohort::VarKind::categorical: return "categorical";
    case cohort::VarKind::continuous: return "continuous";
  }
  return "binary";
}

cohort::Transform parse_transform(const std::string& s) {
  if (s == "none") return cohort::Transform::none;
  if (s == "scale_by_reciprocal_max") return cohort::Transform::scale_by_reciprocal_max;
  if (s == "standardize") return cohort::Transform::standardize;
  if (s == "logit_range") return cohort::Transform::logit_range;
  throw ConfigError("unknown transform '" + s + "'");
}

std::string transform_name(cohort::Transform t) {
  switch (t) {
    case cohort::Transform::none: return "none";
    case cohort::Transform::scale_by_reciprocal_max: return "scale_by_reciprocal_max";
    case cohort::Transform::standardize: return "standardize";
    case cohort::Transform::logit_range: return "logit_range";
  }
  return "none";
}

}  // namespace

cohort::CohortSchema load_schema_json(const std::string& path) {
  const json j = read_json_file(path);
  cohort::CohortSchema s;
  s.visit_interval_months = j.value("visit_interval_months", 3);
  s.max_visits = j.value("max_visits", 20);
  if (!j.contains("variables")) throw ConfigError(path + ": missing variables");
  for (const auto& v : j.at("variables")) {
    cohort::VariableSpec spec;
    spec.name = v.at("name").get<std::string>();
    spec.kind = parse_kind(v.at("kind").get<std::string>());
    spec.longitudinal = v.value("longitudinal", false);
    if (spec.kind == cohort::VarKind::ordinal) spec.ordinal_max = v.at("max").get<int>();
    if (spec.kind == cohort::VarKind::categorical) {
      spec.labels = v.at("labels").get<std::vector<std::string>>();
    }
    if (spec.kind == cohort::VarKind::continuous) {
      spec.lo = v.at("lo").get<double>();
      spec.hi = v.at("hi").get<double>();
    }
    const std::string def_transform =
        spec.kind == cohort::VarKind::ordinal ? "scale_by_reciprocal_max" : "none";
    spec.transform = parse_transform(v.value("transform", def_transform));
    spec.logit_delta = v.value("delta", 0.5);
    spec.round_inverse = v.value("round_inverse", false);
    spec.baseline_indicator = v.value("baseline_indicator", false);
    s.variables.push_back(std::move(spec));
  }
  s.validate();
  return s;
}

void save_schema_json(const std::string& path, const cohort::CohortSchema& schema) {
  json j;
  j["visit_interval_months"] = schema.visit_interval_months;
  j["max_visits"] = schema.max_visits;
  j["variables"] = json::array();
  for (const auto& v : schema.variables) {
    json jv;
    jv["name"] = v.name;
    jv["kind"] = kind_name(v.kind);
    jv["longitudinal"] = v.longitudinal;
    if (v.kind == cohort::VarKind::ordinal) jv["max"] = v.ordinal_max;
    if (v.kind == cohort::VarKind::categorical) jv["labels"] = v.labels;
    if (v.kind == cohort::VarKind::continuous) {
      jv["lo"] = v.lo;
      jv["hi"] = v.hi;
    }
    jv["transform"] = transform_name(v.transform);
    if (v.transform == cohort::Transform::logit_range) jv["delta"] = v.logit_delta;
    if (v.round_inverse) jv["round_inverse"] = true;
    if (v.baseline_indicator) jv["baseline_indicator"] = true;
    j["variables"].push_back(std::move(jv));
  }
  std::ofstream out(path);
  if (!out) throw RunError("cannot write " + path);
  out << j.dump(2) << '\n';
}

void save_normalizers_json(const std::string& path, const cohort::Normalizers& n,
                           const cohort::CohortSchema& schema) {
  json j = json::array();
  for (int i = 0; i < schema.n_variables(); ++i) {
    const auto& e = n.entries[i];
    j.push_back({{"name", schema.variables[i].name},
                 {"mean", e.mean},
                 {"std", e.std},
                 {"scale", e.scale},
                 {"lo", e.lo},
                 {"hi", e.hi},
                 {"delta", e.delta}});
  }
  std::ofstream out(path);
  if (!out) throw RunError("cannot write " + path);
  out << j.dump(2) << '\n';
}

cohort::Normalizers load_normalizers_json(const std::string& path,
                                          const cohort::CohortSchema& schema) {
  const json j = read_json_file(path);
  cohort::Normalizers n;
  n.entries.resize(schema.n_variables());
  if (static_cast<int>(j.size()) != schema.n_variables()) {
    throw DataError(path + ": normalizer count mismatch");
  }
  for (int i = 0; i < schema.n_variables(); ++i) {
    const auto& e = j.at(i);
    if (e.at("name").get<std::string>() != schema.variables[i].name) {
      throw DataError(path + ": normalizer order mismatch at " +
                      schema.variables[i].name);
    }
    n.entries[i].mean = e.at("mean").get<double>();
    n.entries[i].std = e.at("std").get<double>();
    n.entries[i].scale = e.at("scale").get<double>();
    n.entries[i].lo = e.at("lo").get<double>();
    n.entries[i].hi = e.at("hi").get<double>();
    n.entries[i].delta = e.at("delta").get<double>();
  }
  return n;
}

namespace {

void apply_hyperparams(const json& h, train::Hyperparams* hp) {
  hp->n_hidden = h.value("n_hidden", hp->n_hidden);
  hp->n_epochs = h.value("n_epochs", hp->n_epochs);
  hp->batch_size = h.value("batch_size", hp->batch_size);
  hp->learning_rate = h.value("learning_rate", hp->learning_rate);
  hp->sigma_beta = h.value("sigma_beta", hp->sigma_beta);
  hp->l2_penalty = h.value("l2_penalty", hp->l2_penalty);
  hp->adversary_weight = h.value("adversary_weight", hp->adversary_weight);
  hp->mc_steps = h.value("mc_steps", hp->mc_steps);
  hp->positive_fill_sweeps = h.value("positive_fill_sweeps", hp->positive_fill_sweeps);
  hp->critic_trees = h.value("critic_trees", hp->critic_trees);
  hp->critic_depth = h.value("critic_depth", hp->critic_depth);
  hp->lr_decay_to = h.value("lr_decay_to", hp->lr_decay_to);
  hp->driven_autocorr = h.value("driven_autocorr", hp->driven_autocorr);
  hp->optimizer = h.value("optimizer", hp->optimizer);
  hp->n_chains = h.value("n_chains", hp->n_chains);
}

}  // namespace

cohort::CohortSchema RunConfig::load_schema() const {
  if (schema_path.empty()) return cohort::synth_schema();
  return load_schema_json(schema_path);
}

RunConfig load_run_config(const std::string& path) {
  const json j = read_json_file(path);
  RunConfig c;
  c.seed = j.value("seed", c.seed);
  if (j.contains("data")) {
    const auto& d = j.at("data");
    c.schema_path = d.value("schema", "");
    c.tidy_path = d.value("tidy", "");
    c.out_dir = d.value("out_dir", c.out_dir);
  }
  if (j.contains("split")) {
    const auto& s = j.at("split");
    c.f_train = s.value("train", c.f_train);
    c.f_validation = s.value("validation", c.f_validation);
    c.f_test = s.value("test", c.f_test);
  }
  if (j.contains("synth")) {
    const auto& s = j.at("synth");
    c.synth.n_subjects = s.value("n_subjects", c.synth.n_subjects);
    c.synth.min_visits = s.value("min_visits", c.synth.min_visits);
    c.synth.max_visits = s.value("max_visits", c.synth.max_visits);
    c.synth.missing_rate = s.value("missing_rate", c.synth.missing_rate);
    c.synth.static_missing_rate =
        s.value("static_missing_rate", c.synth.static_missing_rate);
    c.synth.ar_phi1 = s.value("ar_phi1", c.synth.ar_phi1);
    c.synth.ar_phi2 = s.value("ar_phi2", c.synth.ar_phi2);
    c.synth.ar_noise = s.value("ar_noise", c.synth.ar_noise);
    c.synth.obs_noise = s.value("obs_noise", c.synth.obs_noise);
    c.synth.drift_spms = s.value("drift_spms", c.synth.drift_spms);
    c.synth.drift_ppms = s.value("drift_ppms", c.synth.drift_ppms);
  }
  if (j.contains("hyperparams")) apply_hyperparams(j.at("hyperparams"), &c.hyperparams);
  c.lag = j.value("lag", c.lag);
  if (j.contains("sampling")) {
    const auto& s = j.at("sampling");
    c.generate.schedule.n_steps = s.value("n_steps", c.generate.schedule.n_steps);
    c.generate.schedule.anneal_steps =
        s.value("anneal_steps", c.generate.schedule.anneal_steps);
    c.generate.schedule.sigma_beta =
        s.value("sigma_beta", c.generate.schedule.sigma_beta);
  }
  if (j.contains("generate")) {
    const auto& g = j.at("generate");
    c.n_subjects_generate = g.value("n_subjects", c.n_subjects_generate);
    c.tau_months = g.value("tau_months", c.tau_months);
  }
  if (j.contains("evaluate")) {
    const auto& e = j.at("evaluate");
    c.evaluate.k_twins = e.value("k_twins", c.evaluate.k_twins);
    c.evaluate.k_metrics = e.value("k_metrics", c.evaluate.k_metrics);
    c.evaluate.adversary.n_sims = e.value("n_sims", c.evaluate.adversary.n_sims);
    c.evaluate.adversary.min_subjects =
        e.value("min_subjects", c.evaluate.adversary.min_subjects);
    c.evaluate.phi.mid_p = e.value("mid_p", c.evaluate.phi.mid_p);
    c.evaluate.phi.min_subjects =
        e.value("phi_min_subjects", c.evaluate.phi.min_subjects);
    c.evaluate.phi.n_tests = e.value("phi_n_tests", c.evaluate.phi.n_tests);
    c.evaluate.relapse_variable =
        e.value("relapse_variable", c.evaluate.relapse_variable);
    c.evaluate.stratum_variable =
        e.value("stratum_variable", c.evaluate.stratum_variable);
    c.evaluate.stratum_label = e.value("stratum_label", c.evaluate.stratum_label);
  }
  c.jobs = j.value("jobs", 0);

  // Grid expansion shares the hyperparams defaults.
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    std::vector<train::Hyperparams> cells{c.hyperparams};
    auto expand = [&](const std::string& key, auto setter) {
      if (!g.contains(key)) return;
      const auto& values = g.at(key);
      if (!values.is_array() || values.empty()) {
        throw ConfigError("grid." + key + " must be a non-empty list");
      }
      std::vector<train::Hyperparams> next;
      next.reserve(cells.size() * values.size());
      for (const auto& cell : cells) {
        for (const auto& v : values) {
          train::Hyperparams hp = cell;
          setter(&hp, v);
          next.push_back(hp);
        }
      }
      cells = std::move(next);
    };
    expand("n_hidden", [](train::Hyperparams* hp, const json& v) {
      hp->n_hidden = v.get<int>();
    });
    expand("n_epochs", [](train::Hyperparams* hp, const json& v) {
      hp->n_epochs = v.get<int>();
    });
    expand("batch_size", [](train::Hyperparams* hp, const json& v) {
      hp->batch_size = v.get<int>();
    });
    expand("learning_rate", [](train::Hyperparams* hp, const json& v) {
      hp->learning_rate = v.get<double>();
    });
    expand("sigma_beta", [](train::Hyperparams* hp, const json& v) {
      hp->sigma_beta = v.get<double>();
    });
    expand("l2_penalty", [](train::Hyperparams* hp, const json& v) {
      hp->l2_penalty = v.get<double>();
    });
    expand("adversary_weight", [](train::Hyperparams* hp, const json& v) {
      hp->adversary_weight = v.get<double>();
    });
    expand("mc_steps", [](train::Hyperparams* hp, const json& v) {
      hp->mc_steps = v.get<int>();
    });
    expand("optimizer", [](train::Hyperparams* hp, const json& v) {
      hp->optimizer = v.get<std::string>();
    });
    c.grid = std::move(cells);
  }
  return c;
}

std::vector<train::Hyperparams> expand_grid(const std::string& config_path) {
  return load_run_config(config_path).grid;
}

}  // namespace crbm::io
