// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsbib/tsbib.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

int exit_code_for(tsbib_status status) {
  switch (status) {
    case TSBIB_OK: return kExitOk;
    case TSBIB_ERR_CONFIG:
    case TSBIB_ERR_ARGUMENT: return kExitConfig;
    default: return kExitValidation;
  }
}

// Thrown to unwind out of a subcommand with a given exit code.
struct Failure {
  int code;
};

void check(tsbib_status status, const std::string& context) {
  if (status == TSBIB_OK) return;
  std::cerr << "tsbib: " << context << ": " << tsbib_last_error() << "\n";
  throw Failure{exit_code_for(status)};
}

struct ConfigDeleter {
  void operator()(tsbib_config* c) const { tsbib_config_destroy(c); }
};
struct DatasetDeleter {
  void operator()(tsbib_dataset* d) const { tsbib_dataset_destroy(d); }
};
using ConfigPtr = std::unique_ptr<tsbib_config, ConfigDeleter>;
using DatasetPtr = std::unique_ptr<tsbib_dataset, DatasetDeleter>;

// snake_case config key -> kebab-case flag.
const std::vector<std::string> kConfigKeys = {
    "window_length", "big_threshold", "small_threshold", "k_min", "k_max", "include_singles",
    "top_k", "feature_mode", "with_patterns", "selection_scope", "folds", "stratified",
    "seed", "min_leaf", "pruning_confidence", "max_depth", "prune", "yates",
    "default_false_anchor", "workers"};

std::string kebab(std::string key) {
  for (auto& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

// Options shared by every subcommand that runs the pipeline.
struct PipelineOptions {
  std::string config_path;
  std::map<std::string, std::string> values;
  bool no_patterns = false;
  bool global_selection = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Flat JSON config file")->check(CLI::ExistingFile);
    for (const auto& key : kConfigKeys) {
      cmd->add_option("--" + kebab(key), values[key], "Override '" + key + "'");
    }
    cmd->add_flag("--no-patterns", no_patterns, "Quantity features only (same as --with-patterns false)");
    cmd->add_flag("--global-selection", global_selection,
                  "Select pattern features once on the whole cohort (same as --selection-scope global)");
  }

  // Precedence: flag > config file > default.
  ConfigPtr build(CLI::App* cmd) const {
    tsbib_config* raw = nullptr;
    check(tsbib_config_create(&raw), "config");
    ConfigPtr config(raw);
    if (!config_path.empty()) check(tsbib_config_load_file(config.get(), config_path.c_str()), config_path);
    for (const auto& key : kConfigKeys) {
      if (cmd->count("--" + kebab(key)) > 0) {
        check(tsbib_config_set(config.get(), key.c_str(), values.at(key).c_str()), "--" + kebab(key));
      }
    }
    if (no_patterns) check(tsbib_config_set(config.get(), "with_patterns", "false"), "--no-patterns");
    if (global_selection) check(tsbib_config_set(config.get(), "selection_scope", "global"), "--global-selection");
    return config;
  }
};

struct DataOptions {
  std::string observations;
  std::string labels;

  void attach(CLI::App* cmd) {
    cmd->add_option("--observations", observations, "Observations CSV (entity_id,metric,year,value)")->required();
    cmd->add_option("--labels", labels, "Labels CSV (entity_id,label,anchor_year)")->required();
  }

  DatasetPtr load(const tsbib_config* config) const {
    tsbib_dataset* raw = nullptr;
    const auto status = tsbib_dataset_load(config, observations.c_str(), labels.c_str(), &raw);
    if (status == TSBIB_ERR_ARGUMENT) check(TSBIB_ERR_DATA, "load");  // bad data, not bad flags
    check(status, "load");
    return DatasetPtr(raw);
  }
};

void print_summary(const tsbib_dataset* dataset) {
  tsbib_dataset_summary s{};
  check(tsbib_dataset_summarize(dataset, &s), "summary");
  std::cout << "observations: " << s.observations << "\n"
            << "entities: " << s.entities << " (TRUE " << s.true_entities << ", FALSE " << s.false_entities
            << ")\n"
            << "window_length: " << s.window_length << "\n"
            << "skipped unlabeled entities: " << s.skipped_unlabeled << "\n";
}

std::string join(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic change-pattern features and decision-tree classification for yearly metric series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tsbib_version()));

  // validate
  DataOptions validate_data;
  PipelineOptions validate_opts;
  auto* validate = app.add_subcommand("validate", "Check observation and label files and summarize the cohort");
  validate_data.attach(validate);
  validate_opts.attach(validate);

  // featurize
  DataOptions featurize_data;
  PipelineOptions featurize_opts;
  std::string featurize_out = ".";
  std::string feature_space_path;
  auto* featurize = app.add_subcommand("featurize", "Select pattern features on the whole cohort and write features.json");
  featurize_data.attach(featurize);
  featurize_opts.attach(featurize);
  featurize->add_option("--out-dir", featurize_out, "Output directory");
  featurize->add_option("--feature-space", feature_space_path, "Reuse the pattern list from this features.json")
      ->check(CLI::ExistingFile);

  // evaluate
  DataOptions evaluate_data;
  PipelineOptions evaluate_opts;
  std::string evaluate_out = ".";
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate baseline and combined features; write report.json/.md");
  evaluate_data.attach(evaluate);
  evaluate_opts.attach(evaluate);
  evaluate->add_option("--out-dir", evaluate_out, "Output directory");

  // pipeline
  DataOptions pipeline_data;
  PipelineOptions pipeline_opts;
  std::string pipeline_out = ".";
  auto* pipeline = app.add_subcommand("pipeline", "featurize + evaluate + tree export in one run");
  pipeline_data.attach(pipeline);
  pipeline_opts.attach(pipeline);
  pipeline->add_option("--out-dir", pipeline_out, "Output directory");

  // synth
  tsbib_synth_params synth_params;
  tsbib_synth_params_init(&synth_params);
  std::string synth_out = ".";
  std::string synth_metric = synth_params.metric;
  std::string synth_shape = synth_params.shape;
  bool synth_no_plant = false;
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic cohort as CSV files");
  synth->add_option("--out-dir", synth_out, "Output directory");
  synth->add_option("--n-true", synth_params.n_true, "TRUE entities")->capture_default_str();
  synth->add_option("--n-false", synth_params.n_false, "FALSE entities")->capture_default_str();
  synth->add_option("--window-length", synth_params.window_length, "Window length in years")->capture_default_str();
  synth->add_option("--metric", synth_metric, "Metric receiving the plant")->capture_default_str();
  synth->add_option("--shape", synth_shape, "Symbol shape to plant")->capture_default_str();
  synth->add_option("--years-before-anchor", synth_params.years_before_anchor,
                    "Years between the planted shape and the anchor")
      ->capture_default_str();
  synth->add_option("--noise", synth_params.noise, "Per-symbol probability the plant is skipped")
      ->capture_default_str();
  synth->add_option("--seed", synth_params.seed, "Random seed")->capture_default_str();
  synth->add_option("--false-anchor", synth_params.false_anchor_year, "Anchor year of FALSE entities")
      ->capture_default_str();
  synth->add_flag("--no-plant", synth_no_plant, "Generate the null cohort (no planted pattern)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (validate->parsed()) {
      auto config = validate_opts.build(validate);
      auto dataset = validate_data.load(config.get());
      print_summary(dataset.get());
      std::cout << "ok\n";
    } else if (featurize->parsed()) {
      auto config = featurize_opts.build(featurize);
      auto dataset = featurize_data.load(config.get());
      const auto out = join(featurize_out, "features.json");
      check(tsbib_featurize(dataset.get(), config.get(),
                            feature_space_path.empty() ? nullptr : feature_space_path.c_str(), out.c_str()),
            "featurize");
      std::cout << "wrote " << out << "\n";
    } else if (evaluate->parsed()) {
      auto config = evaluate_opts.build(evaluate);
      auto dataset = evaluate_data.load(config.get());
      check(tsbib_evaluate(dataset.get(), config.get(), evaluate_out.c_str()), "evaluate");
      std::cout << "wrote " << join(evaluate_out, "report.json") << " and " << join(evaluate_out, "report.md")
                << "\n";
    } else if (pipeline->parsed()) {
      auto config = pipeline_opts.build(pipeline);
      auto dataset = pipeline_data.load(config.get());
      const auto features = join(pipeline_out, "features.json");
      const auto tree = join(pipeline_out, "tree.json");
      check(tsbib_featurize(dataset.get(), config.get(), nullptr, features.c_str()), "featurize");
      check(tsbib_evaluate(dataset.get(), config.get(), pipeline_out.c_str()), "evaluate");
      check(tsbib_export_tree(dataset.get(), config.get(), tree.c_str()), "tree");
      std::cout << "wrote features.json, report.json, report.md, tree.json to " << pipeline_out << "\n";
    } else if (synth->parsed()) {
      synth_params.plant = synth_no_plant ? 0 : 1;
      synth_params.metric = synth_metric.c_str();
      synth_params.shape = synth_shape.c_str();
      check(tsbib_synth_write(&synth_params, synth_out.c_str()), "synth");
      std::cout << "wrote " << join(synth_out, "observations.csv") << " and " << join(synth_out, "labels.csv")
                << "\n";
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return kExitOk;
}
