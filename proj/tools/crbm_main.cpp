#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "crbm/errors.hpp"
#include "crbm/pipeline.hpp"

namespace {

crbm::io::RunConfig load_config(const std::string& path, uint64_t* seed_override,
                                std::string* out_override, int jobs) {
  crbm::io::RunConfig config = crbm::io::load_run_config(path);
  if (seed_override != nullptr) config.seed = *seed_override;
  if (out_override != nullptr && !out_override->empty()) {
    config.out_dir = *out_override;
  }
  if (jobs > 0) config.jobs = jobs;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bidirectional CRBM trainer for longitudinal cohorts: digital "
               "subjects, digital twins, and indistinguishability evaluation"};
  app.require_subcommand(1);

  std::string config_path, out, model, mode = "twins", twins_source = "model";
  uint64_t seed = 0;
  bool seed_set = false, resume = false;
  int jobs = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
    cmd->add_option_function<uint64_t>(
        "--seed", [&](uint64_t s) { seed = s; seed_set = true; },
        "Override the config seed");
    cmd->add_option("--jobs", jobs, "Worker threads (0 = hardware)");
  };

  CLI::App* prepare = app.add_subcommand("prepare", "Split data, fit normalizers");
  add_common(prepare);
  prepare->add_option("--out", out, "Output directory override");

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic cohort CSV");
  add_common(synth);
  synth->add_option("--out", out, "Output CSV path")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "Hyperparameter grid + selection");
  add_common(sweep);
  sweep->add_flag("--resume", resume, "Skip completed cells");
  sweep->add_option("--out", out, "Output directory override");

  CLI::App* train = app.add_subcommand("train", "Train a single model");
  add_common(train);
  train->add_option("--out", out, "Model file path")->required();

  CLI::App* generate = app.add_subcommand("generate", "Sample digital cohorts");
  add_common(generate);
  generate->add_option("--model", model, "Model file")->required();
  generate->add_option("--mode", mode, "subjects|twins");
  generate->add_option("--out", out, "Output CSV path")->required();

  CLI::App* evaluate = app.add_subcommand("evaluate", "Goodness-of-fit reports");
  add_common(evaluate);
  evaluate->add_option("--model", model, "Model file");
  evaluate->add_option("--twins", twins_source,
                       "model = generate twins, synth = ground-truth null draws");

  CLI11_PARSE(app, argc, argv);

  try {
    uint64_t* seed_ptr = seed_set ? &seed : nullptr;
    if (prepare->parsed()) {
      crbm::io::cmd_prepare(load_config(config_path, seed_ptr, &out, jobs));
    } else if (synth->parsed()) {
      crbm::io::cmd_synth(load_config(config_path, seed_ptr, nullptr, jobs), out);
    } else if (sweep->parsed()) {
      crbm::io::cmd_sweep(load_config(config_path, seed_ptr, &out, jobs), resume);
    } else if (train->parsed()) {
      crbm::io::cmd_train(load_config(config_path, seed_ptr, nullptr, jobs), out);
    } else if (generate->parsed()) {
      crbm::io::cmd_generate(load_config(config_path, seed_ptr, nullptr, jobs),
                             model, mode, out);
    } else if (evaluate->parsed()) {
      if (twins_source == "model" && model.empty()) {
        std::fprintf(stderr, "error: evaluate --twins model requires --model\n");
        return 1;
      }
      crbm::io::cmd_evaluate(load_config(config_path, seed_ptr, nullptr, jobs),
                             model, twins_source);
    }
  } catch (const crbm::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const crbm::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run failure: %s\n", e.what());
    return 3;
  }
  return 0;
}
