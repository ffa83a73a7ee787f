#include "crbm/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "crbm/model_io.hpp"
#include "crbm/parallel.hpp"
#include "crbm/split.hpp"
#include "crbm/sweep.hpp"
#include "crbm/reports.hpp"
#include "crbm/tidy.hpp"
#include "json.hpp"

namespace crbm::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<cohort::SubjectRecord> load_or_synth(const RunConfig& config,
                                                 const cohort::CohortSchema& schema) {
  if (!config.tidy_path.empty()) {
    return cohort::load_tidy(config.tidy_path, schema);
  }
  return cohort::synth_cohort(config.synth, derive_seed(config.seed, 0xDA7AULL));
}

struct Prepared {
  cohort::CohortSchema schema;
  cohort::Normalizers norms;
  cohort::SplitResult split;
};

Prepared prepare_in_memory(const RunConfig& config) {
  Prepared p;
  p.schema = config.load_schema();
  const auto records = load_or_synth(config, p.schema);
  p.split = cohort::split_dataset(records, config.f_train, config.f_validation,
                                  config.f_test, config.seed);
  p.norms = cohort::fit_normalizers(p.split.train, p.schema);
  return p;
}

void write_split_manifest(const std::string& path, const cohort::SplitResult& split) {
  json j;
  auto ids = [](const std::vector<cohort::SubjectRecord>& recs) {
    json out = json::array();
    for (const auto& r : recs) out.push_back(r.subject_id);
    return out;
  };
  j["counts"] = {{"train", split.train.size()},
                 {"validation", split.validation.size()},
                 {"test", split.test.size()}};
  j["train"] = ids(split.train);
  j["validation"] = ids(split.validation);
  j["test"] = ids(split.test);
  std::ofstream out(path);
  if (!out) throw RunError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

void cmd_prepare(const RunConfig& config) {
  fs::create_directories(config.out_dir);
  Prepared p = prepare_in_memory(config);

  save_schema_json((fs::path(config.out_dir) / "schema.json").string(), p.schema);
  save_normalizers_json((fs::path(config.out_dir) / "normalizers.json").string(),
                        p.norms, p.schema);
  write_split_manifest((fs::path(config.out_dir) / "split.json").string(), p.split);
  // Persist the cohort itself so later stages reload identical data.
  std::vector<cohort::SubjectRecord> all = p.split.train;
  all.insert(all.end(), p.split.validation.begin(), p.split.validation.end());
  all.insert(all.end(), p.split.test.begin(), p.split.test.end());
  cohort::save_tidy((fs::path(config.out_dir) / "cohort.csv").string(), all, p.schema);

  const BlockLayout layout(p.schema, config.lag);
  const auto triplets =
      cohort::build_triplets(p.split.train, p.schema, p.norms, layout);
  json manifest;
  manifest["n_subjects"] =
      p.split.train.size() + p.split.validation.size() + p.split.test.size();
  manifest["counts"] = {{"train", p.split.train.size()},
                        {"validation", p.split.validation.size()},
                        {"test", p.split.test.size()}};
  manifest["train_triplets"] = triplets.size();
  manifest["grid_cells"] = config.grid.size();
  manifest["seed"] = config.seed;
  std::ofstream out(fs::path(config.out_dir) / "prepare_manifest.json");
  out << manifest.dump(2) << '\n';
}

void cmd_synth(const RunConfig& config, const std::string& out_csv) {
  const auto schema = cohort::synth_schema();
  const auto records =
      cohort::synth_cohort(config.synth, derive_seed(config.seed, 0xDA7AULL));
  cohort::save_tidy(out_csv, records, schema);
  save_schema_json(out_csv + ".schema.json", schema);
}

namespace {

struct LoadedSplit {
  cohort::CohortSchema schema;
  cohort::Normalizers norms;
  std::vector<cohort::SubjectRecord> train, validation, test;
};

LoadedSplit load_prepared(const RunConfig& config) {
  LoadedSplit out;
  const fs::path dir(config.out_dir);
  if (!fs::exists(dir / "schema.json")) {
    throw ConfigError("out_dir has no prepare artifacts; run prepare first");
  }
  out.schema = load_schema_json((dir / "schema.json").string());
  out.norms =
      load_normalizers_json((dir / "normalizers.json").string(), out.schema);
  auto all = cohort::load_tidy((dir / "cohort.csv").string(), out.schema);
  std::ifstream in(dir / "split.json");
  json split;
  in >> split;
  auto take = [&](const char* key, std::vector<cohort::SubjectRecord>* dst) {
    std::set<std::string> ids;
    for (const auto& id : split.at(key)) ids.insert(id.get<std::string>());
    for (const auto& rec : all) {
      if (ids.count(rec.subject_id)) dst->push_back(rec);
    }
  };
  take("train", &out.train);
  take("validation", &out.validation);
  take("test", &out.test);
  return out;
}

}  // namespace

void cmd_sweep(const RunConfig& config, bool resume) {
  LoadedSplit data = load_prepared(config);
  const BlockLayout layout(data.schema, config.lag);

  SweepInputs inputs;
  inputs.schema = data.schema;
  inputs.norms = data.norms;
  inputs.layout = layout;
  inputs.train_triplets =
      cohort::build_triplets(data.train, data.schema, data.norms, layout);
  inputs.validation = data.validation;
  inputs.generate = config.generate;
  inputs.evaluate = config.evaluate;

  const auto& grid = config.grid.empty()
                         ? std::vector<train::Hyperparams>{config.hyperparams}
                         : config.grid;
  SweepOutcome outcome =
      run_sweep(inputs, grid, config.out_dir, config.seed, config.jobs, resume);
  save_rank_csv((fs::path(config.out_dir) / "ranks.csv").string(), outcome.table,
                outcome.ranks);

  // Final model: selected hyperparameters refit on train + validation.
  std::vector<cohort::SubjectRecord> combined = data.train;
  combined.insert(combined.end(), data.validation.begin(), data.validation.end());
  const auto combined_norms = cohort::fit_normalizers(combined, data.schema);
  const auto triplets =
      cohort::build_triplets(combined, data.schema, combined_norms, layout);
  const train::Hyperparams selected_hp = outcome.cells[outcome.selected].hp;
  const auto final_model =
      train::train(triplets, layout, selected_hp, derive_seed(config.seed, 0xF17A1ULL));
  if (!final_model.ok) {
    throw RunError("final model training failed: " + final_model.failure);
  }
  save_normalizers_json((fs::path(config.out_dir) / "final_normalizers.json").string(),
                        combined_norms, data.schema);
  save_model((fs::path(config.out_dir) / "final_model.crbm").string(),
             final_model.params, data.schema);

  json j;
  j["selected_cell"] = outcome.selected;
  j["selected_hyperparams"] = {{"n_hidden", selected_hp.n_hidden},
                               {"n_epochs", selected_hp.n_epochs},
                               {"batch_size", selected_hp.batch_size},
                               {"learning_rate", selected_hp.learning_rate},
                               {"sigma_beta", selected_hp.sigma_beta},
                               {"l2_penalty", selected_hp.l2_penalty},
                               {"adversary_weight", selected_hp.adversary_weight},
                               {"mc_steps", selected_hp.mc_steps},
                               {"optimizer", selected_hp.optimizer}};
  j["final_model"] = "final_model.crbm";
  std::ofstream out(fs::path(config.out_dir) / "sweep_result.json");
  out << j.dump(2) << '\n';
}

void cmd_train(const RunConfig& config, const std::string& model_out) {
  LoadedSplit data = load_prepared(config);
  const BlockLayout layout(data.schema, config.lag);
  const auto triplets =
      cohort::build_triplets(data.train, data.schema, data.norms, layout);
  const auto heldout =
      cohort::build_triplets(data.validation, data.schema, data.norms, layout);
  const auto result = train::train(triplets, layout, config.hyperparams,
                                   config.seed, &heldout);
  // Training log as line-delimited records.
  std::ofstream log(model_out + ".log.jsonl");
  for (const auto& e : result.log) {
    json j;
    j["epoch"] = e.epoch;
    j["reconstruction_rmse"] = e.reconstruction_rmse;
    j["free_energy_train"] = e.free_energy_train;
    j["free_energy_heldout"] = e.free_energy_heldout;
    j["free_energy_gap"] = e.free_energy_gap;
    j["grad_norm"] = e.grad_norm;
    j["beta_mean"] = e.beta_mean;
    j["learning_rate"] = e.learning_rate;
    log << j.dump() << '\n';
  }
  if (!result.ok) throw RunError("training failed: " + result.failure);
  save_model(model_out, result.params, data.schema);
}

void cmd_generate(const RunConfig& config, const std::string& model_path,
                  const std::string& mode, const std::string& out_csv) {
  LoadedSplit data = load_prepared(config);
  const auto norms_path = fs::path(config.out_dir) / "final_normalizers.json";
  const auto norms = fs::exists(norms_path)
                         ? load_normalizers_json(norms_path.string(), data.schema)
                         : data.norms;
  const CrbmParams params = load_model(model_path, data.schema);

  std::vector<cohort::SubjectRecord> generated;
  if (mode == "subjects") {
    generated.resize(config.n_subjects_generate);
    parallel_for(config.n_subjects_generate, config.jobs, [&](int i) {
      generated[i] = sampling::generate_digital_subject(
          params, data.schema, norms, config.generate, config.tau_months,
          derive_seed(config.seed, 0xD161ULL, i));
      generated[i].subject_id = "DS" + std::to_string(i + 1);
    });
  } else if (mode == "twins") {
    const auto twinset = sampling::generate_twinset(
        params, data.schema, norms, data.test, config.evaluate.k_twins,
        config.generate, derive_seed(config.seed, 0x714ULL), config.jobs);
    for (size_t i = 0; i < twinset.twins.size(); ++i) {
      for (const auto& twin : twinset.twins[i]) generated.push_back(twin);
    }
  } else {
    throw ConfigError("generate mode must be subjects or twins");
  }
  cohort::save_tidy(out_csv, generated, data.schema);

  json prov;
  prov["mode"] = mode;
  prov["model"] = model_path;
  prov["seed"] = config.seed;
  prov["schedule"] = {{"n_steps", config.generate.schedule.n_steps},
                      {"anneal_steps", config.generate.schedule.anneal_steps},
                      {"sigma_beta", config.generate.schedule.sigma_beta}};
  prov["n_trajectories"] = generated.size();
  std::ofstream out(out_csv + ".provenance.json");
  out << prov.dump(2) << '\n';
}

void cmd_evaluate(const RunConfig& config, const std::string& model_path,
                  const std::string& twins_source) {
  LoadedSplit data = load_prepared(config);
  sampling::TwinSet twins;
  if (twins_source == "synth") {
    // Null reference: fresh draws from the synthetic ground-truth generator.
    twins.schema = data.schema;
    twins.subjects = data.test;
    twins.twins = cohort::synth_fresh_twins(data.test, config.evaluate.k_twins,
                                            config.synth,
                                            derive_seed(config.seed, 0x9177ULL));
  } else {
    const auto norms_path = fs::path(config.out_dir) / "final_normalizers.json";
    const auto norms = fs::exists(norms_path)
                           ? load_normalizers_json(norms_path.string(), data.schema)
                           : data.norms;
    const CrbmParams params = load_model(model_path, data.schema);
    twins = sampling::generate_twinset(params, data.schema, norms, data.test,
                                       config.evaluate.k_twins, config.generate,
                                       derive_seed(config.seed, 0x714ULL),
                                       config.jobs);
  }
  EvaluateSettings settings = config.evaluate;
  settings.adversary.n_threads = config.jobs;
  const EvaluationBundle bundle =
      evaluate_twinset(twins, settings, derive_seed(config.seed, 0xE7A1ULL));
  write_evaluation_reports((fs::path(config.out_dir) / "evaluation").string(),
                           twins, bundle);
}

}  // namespace crbm::io
