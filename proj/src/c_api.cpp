#include "tsbib/tsbib.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "tsbib/errors.hpp"
#include "tsbib/ingest.hpp"
#include "tsbib/pipeline.hpp"
#include "tsbib/synth.hpp"

struct tsbib_config {
  tsbib::PipelineConfig value;
};

struct tsbib_dataset {
  std::size_t observations = 0;
  tsbib::Cohort cohort;
};

namespace {

thread_local std::string g_last_error;

tsbib_status fail(tsbib_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps exceptions escaping the core onto status codes.
template <typename Fn>
tsbib_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const tsbib::ConfigError& e) {
    return fail(TSBIB_ERR_CONFIG, e.what());
  } catch (const tsbib::DataError& e) {
    return fail(TSBIB_ERR_DATA, e.what());
  } catch (const tsbib::Error& e) {
    return fail(TSBIB_ERR_ARGUMENT, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(TSBIB_ERR_DATA, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TSBIB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TSBIB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TSBIB_ERR_INTERNAL, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
}

template <typename Fn>
tsbib_status guarded_io(Fn&& fn) {
  return guarded([&]() -> tsbib_status {
    try {
      return fn();
    } catch (const std::ios_base::failure& e) {
      return fail(TSBIB_ERR_IO, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
      return fail(TSBIB_ERR_IO, e.what());
    }
  });
}

}  // namespace

extern "C" {

const char* tsbib_version(void) { return "1.0.0"; }

const char* tsbib_last_error(void) { return g_last_error.c_str(); }

void tsbib_string_free(char* str) { std::free(str); }

tsbib_status tsbib_config_create(tsbib_config** out) {
  if (!out) return fail(TSBIB_ERR_ARGUMENT, "out is null");
  return guarded([&] {
    *out = new tsbib_config{};
    return TSBIB_OK;
  });
}

void tsbib_config_destroy(tsbib_config* config) { delete config; }

tsbib_status tsbib_config_load_file(tsbib_config* config, const char* path) {
  if (!config || !path) return fail(TSBIB_ERR_ARGUMENT, "config or path is null");
  return guarded([&] {
    config->value = tsbib::load_config_file(path, config->value);
    return TSBIB_OK;
  });
}

tsbib_status tsbib_config_set(tsbib_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(TSBIB_ERR_ARGUMENT, "config, key or value is null");
  return guarded([&] {
    tsbib::set_config_value(config->value, key, value);
    return TSBIB_OK;
  });
}

tsbib_status tsbib_config_to_json(const tsbib_config* config, char** out_json) {
  if (!config || !out_json) return fail(TSBIB_ERR_ARGUMENT, "config or out_json is null");
  return guarded([&] {
    *out_json = duplicate(tsbib::config_json(config->value).dump(2));
    return *out_json ? TSBIB_OK : fail(TSBIB_ERR_INTERNAL, "out of memory");
  });
}

tsbib_status tsbib_dataset_load(const tsbib_config* config, const char* observations_path, const char* labels_path,
                                tsbib_dataset** out) {
  if (!config || !observations_path || !labels_path || !out) {
    return fail(TSBIB_ERR_ARGUMENT, "null argument to tsbib_dataset_load");
  }
  return guarded([&] {
    config->value.validate();
    const auto observations = tsbib::load_observations(observations_path);
    const auto labels = tsbib::load_labels(labels_path, config->value.default_false_anchor);
    auto dataset = std::make_unique<tsbib_dataset>();
    dataset->observations = observations.size();
    dataset->cohort = tsbib::build_cohort(observations, labels, config->value.window_length);
    *out = dataset.release();
    return TSBIB_OK;
  });
}

void tsbib_dataset_destroy(tsbib_dataset* dataset) { delete dataset; }

tsbib_status tsbib_dataset_summarize(const tsbib_dataset* dataset, tsbib_dataset_summary* out) {
  if (!dataset || !out) return fail(TSBIB_ERR_ARGUMENT, "dataset or out is null");
  out->observations = dataset->observations;
  out->entities = dataset->cohort.entities.size();
  out->true_entities = dataset->cohort.count(tsbib::Label::True);
  out->false_entities = dataset->cohort.count(tsbib::Label::False);
  out->skipped_unlabeled = dataset->cohort.skipped_unlabeled;
  out->window_length = dataset->cohort.window_length;
  return TSBIB_OK;
}

tsbib_status tsbib_featurize(const tsbib_dataset* dataset, const tsbib_config* config, const char* feature_space_path,
                             const char* features_out_path) {
  if (!dataset || !config || !features_out_path) return fail(TSBIB_ERR_ARGUMENT, "null argument to tsbib_featurize");
  return guarded_io([&] {
    std::optional<tsbib::FeatureSpace> fixed;
    if (feature_space_path) {
      std::ifstream in(feature_space_path);
      if (!in) throw tsbib::DataError(std::string("cannot open ") + feature_space_path);
      auto doc = nlohmann::json::parse(in);
      fixed = tsbib::feature_space_from_json(doc.contains("feature_space") ? doc["feature_space"] : doc);
    }
    const auto data = tsbib::featurize(dataset->cohort, config->value);
    const auto features = tsbib::export_features(data, config->value, fixed);
    write_text(features_out_path, tsbib::features_json(features, config->value).dump(2) + "\n");
    return TSBIB_OK;
  });
}

tsbib_status tsbib_evaluate(const tsbib_dataset* dataset, const tsbib_config* config, const char* out_dir) {
  if (!dataset || !config || !out_dir) return fail(TSBIB_ERR_ARGUMENT, "null argument to tsbib_evaluate");
  return guarded_io([&] {
    const auto data = tsbib::featurize(dataset->cohort, config->value);
    const auto report = tsbib::evaluate(data, config->value);
    const std::filesystem::path dir(out_dir);
    write_text(dir / "report.json", tsbib::report_json(report).dump(2) + "\n");
    write_text(dir / "report.md", tsbib::report_markdown(report));
    return TSBIB_OK;
  });
}

tsbib_status tsbib_export_tree(const tsbib_dataset* dataset, const tsbib_config* config, const char* tree_out_path) {
  if (!dataset || !config || !tree_out_path) return fail(TSBIB_ERR_ARGUMENT, "null argument to tsbib_export_tree");
  return guarded_io([&] {
    const auto data = tsbib::featurize(dataset->cohort, config->value);
    write_text(tree_out_path, tsbib::full_tree_json(data, config->value).dump(2) + "\n");
    return TSBIB_OK;
  });
}

void tsbib_synth_params_init(tsbib_synth_params* params) {
  if (!params) return;
  params->n_true = 40;
  params->n_false = 40;
  params->window_length = 10;
  params->plant = 1;
  params->metric = "international_papers";
  params->shape = "Uu";
  params->years_before_anchor = 3;
  params->noise = 0.2;
  params->seed = 42;
  params->false_anchor_year = tsbib::kDefaultFalseAnchorYear;
}

tsbib_status tsbib_synth_write(const tsbib_synth_params* params, const char* out_dir) {
  if (!params || !out_dir) return fail(TSBIB_ERR_ARGUMENT, "params or out_dir is null");
  return guarded_io([&] {
    tsbib::SynthConfig config;
    config.n_true = params->n_true;
    config.n_false = params->n_false;
    config.window_length = params->window_length;
    config.seed = params->seed;
    config.false_anchor_year = params->false_anchor_year;
    if (params->plant) {
      tsbib::PlantSpec plant;
      if (!params->metric || !params->shape) return fail(TSBIB_ERR_ARGUMENT, "plant metric or shape is null");
      const auto metric = tsbib::parse_metric(params->metric);
      if (!metric) throw tsbib::ConfigError(std::string("unknown metric '") + params->metric + "'");
      plant.metric = *metric;
      plant.shape = params->shape;
      plant.years_before_anchor = params->years_before_anchor;
      plant.noise = params->noise;
      config.plant = plant;
    }
    const auto data = tsbib::generate_cohort(config);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    {
      std::ofstream out(dir / "observations.csv", std::ios::binary);
      tsbib::write_observations_csv(out, data.observations);
      if (!out) throw std::ios_base::failure("cannot write observations.csv");
    }
    {
      std::ofstream out(dir / "labels.csv", std::ios::binary);
      tsbib::write_labels_csv(out, data.labels, config.false_anchor_year);
      if (!out) throw std::ios_base::failure("cannot write labels.csv");
    }
    return TSBIB_OK;
  });
}

tsbib_status tsbib_symbolize(const double* raw, size_t n, double big_threshold, double small_threshold, char* out,
                             size_t out_capacity) {
  if (!raw || !out) return fail(TSBIB_ERR_ARGUMENT, "raw or out is null");
  if (n < 2) return fail(TSBIB_ERR_ARGUMENT, "need at least 2 values");
  if (out_capacity < n) return fail(TSBIB_ERR_ARGUMENT, "output buffer too small");
  return guarded([&] {
    tsbib::SymbolAlphabet alphabet{big_threshold, small_threshold};
    alphabet.validate();
    const auto symbols = tsbib::symbolize(std::span<const double>(raw, n), alphabet);
    std::memcpy(out, symbols.c_str(), symbols.size() + 1);
    return TSBIB_OK;
  });
}

tsbib_status tsbib_chi_squared_2x2(int a_correct, int a_incorrect, int b_correct, int b_incorrect, int yates,
                                   double* statistic, double* p_value) {
  if (!statistic || !p_value) return fail(TSBIB_ERR_ARGUMENT, "statistic or p_value is null");
  return guarded([&] {
    const auto r = tsbib::chi_squared_2x2({a_correct, a_incorrect}, {b_correct, b_incorrect}, yates != 0);
    *statistic = r.statistic;
    *p_value = r.p_value;
    return TSBIB_OK;
  });
}

}  // extern "C"
