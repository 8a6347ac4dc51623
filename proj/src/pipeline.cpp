#include "tsbib/pipeline.hpp"

#include <charconv>
#include <fstream>

#include "tsbib/errors.hpp"
#include "tsbib/parallel.hpp"

namespace tsbib {

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("invalid boolean '" + std::string(text) + "' for " + std::string(key));
}

std::string_view mode_name(FeatureMode m) { return m == FeatureMode::Binary ? "binary" : "counts"; }
std::string_view scope_name(SelectionScope s) { return s == SelectionScope::Global ? "global" : "per_fold"; }

}  // namespace

void PipelineConfig::validate() const {
  if (window_length < 2) throw ConfigError("window_length must be >= 2");
  alphabet.validate();
  patterns.validate();
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
  if (folds < 2) throw ConfigError("folds must be >= 2");
  tree.validate();
  if (workers < 0) throw ConfigError("workers must be >= 0");
}

void set_config_value(PipelineConfig& c, std::string_view key, std::string_view value) {
  if (key == "window_length") c.window_length = parse_number<int>(key, value);
  else if (key == "big_threshold") c.alphabet.big_threshold = parse_number<double>(key, value);
  else if (key == "small_threshold") c.alphabet.small_threshold = parse_number<double>(key, value);
  else if (key == "k_min") c.patterns.k_min = parse_number<int>(key, value);
  else if (key == "k_max") c.patterns.k_max = parse_number<int>(key, value);
  else if (key == "include_singles") c.patterns.include_singles = parse_bool(key, value);
  else if (key == "top_k") c.top_k = parse_number<int>(key, value);
  else if (key == "feature_mode") {
    if (value == "counts") c.feature_mode = FeatureMode::Counts;
    else if (value == "binary") c.feature_mode = FeatureMode::Binary;
    else throw ConfigError("feature_mode must be 'counts' or 'binary'");
  } else if (key == "with_patterns") c.with_patterns = parse_bool(key, value);
  else if (key == "selection_scope") {
    if (value == "per_fold" || value == "per-fold") c.selection_scope = SelectionScope::PerFold;
    else if (value == "global") c.selection_scope = SelectionScope::Global;
    else throw ConfigError("selection_scope must be 'per_fold' or 'global'");
  } else if (key == "folds") c.folds = parse_number<int>(key, value);
  else if (key == "stratified") c.stratified = parse_bool(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "min_leaf") c.tree.min_leaf = parse_number<int>(key, value);
  else if (key == "pruning_confidence") c.tree.pruning_confidence = parse_number<double>(key, value);
  else if (key == "max_depth") c.tree.max_depth = parse_number<int>(key, value);
  else if (key == "prune") c.tree.prune = parse_bool(key, value);
  else if (key == "yates") c.yates = parse_bool(key, value);
  else if (key == "default_false_anchor") c.default_false_anchor = parse_number<int>(key, value);
  else if (key == "workers") c.workers = parse_number<int>(key, value);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::vector<std::string> config_keys() {
  return {"window_length", "big_threshold", "small_threshold", "k_min", "k_max", "include_singles",
          "top_k", "feature_mode", "with_patterns", "selection_scope", "folds", "stratified",
          "seed", "min_leaf", "pruning_confidence", "max_depth", "prune", "yates",
          "default_false_anchor", "workers"};
}

void apply_config_json(PipelineConfig& config, const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config file must hold a flat JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (value.is_string()) set_config_value(config, key, value.get<std::string>());
    else if (value.is_boolean()) set_config_value(config, key, value.get<bool>() ? "true" : "false");
    else if (value.is_number()) set_config_value(config, key, value.dump());
    else throw ConfigError("config key '" + key + "' must be a string, number or boolean");
  }
}

PipelineConfig load_config_file(const std::string& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  apply_config_json(base, doc);
  return base;
}

nlohmann::ordered_json config_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["window_length"] = c.window_length;
  j["big_threshold"] = c.alphabet.big_threshold;
  j["small_threshold"] = c.alphabet.small_threshold;
  j["k_min"] = c.patterns.k_min;
  j["k_max"] = c.patterns.k_max;
  j["include_singles"] = c.patterns.include_singles;
  j["top_k"] = c.top_k;
  j["feature_mode"] = mode_name(c.feature_mode);
  j["with_patterns"] = c.with_patterns;
  j["selection_scope"] = scope_name(c.selection_scope);
  j["folds"] = c.folds;
  j["stratified"] = c.stratified;
  j["seed"] = c.seed;
  j["min_leaf"] = c.tree.min_leaf;
  j["pruning_confidence"] = c.tree.pruning_confidence;
  j["max_depth"] = c.tree.max_depth;
  j["prune"] = c.tree.prune;
  j["yates"] = c.yates;
  j["default_false_anchor"] = c.default_false_anchor;
  return j;
}

std::vector<Label> FeaturizedCohort::labels() const {
  std::vector<Label> out;
  out.reserve(entities.size());
  for (const auto& e : entities) out.push_back(e.label);
  return out;
}

FeaturizedCohort featurize(const Cohort& cohort, const PipelineConfig& config) {
  config.validate();
  if (cohort.window_length != config.window_length) {
    throw ConfigError("cohort window_length " + std::to_string(cohort.window_length) +
                      " does not match configured window_length " + std::to_string(config.window_length));
  }
  FeaturizedCohort out;
  out.entities.resize(cohort.entities.size());
  out.symbols.resize(cohort.entities.size());
  parallel_for(cohort.entities.size(), config.workers, [&](std::size_t i) {
    const auto& entity = cohort.entities[i];
    std::vector<MetricSymbols> per_metric;
    for (MetricId m : kAllMetrics) {
      auto symbols = symbolize(entity[m], config.alphabet);
      out.symbols[i][metric_index(m)] = symbols;
      per_metric.push_back(MetricSymbols{m, std::move(symbols)});
    }
    auto& features = out.entities[i];
    features.entity_id = entity.entity_id;
    features.label = entity.label;
    features.quantities = quantity_features(entity);
    features.patterns = count_patterns(entity.entity_id, per_metric, config.patterns);
  });
  return out;
}

FeatureExport export_features(const FeaturizedCohort& data, const PipelineConfig& config,
                              const std::optional<FeatureSpace>& fixed_space) {
  FeatureExport out;
  if (fixed_space) {
    out.space = *fixed_space;
  } else if (config.with_patterns) {
    out.space = select_features(data.entities, config.top_k);
  }
  out.matrix = build_matrix(data.entities, out.space, config.feature_mode, config.with_patterns);
  return out;
}

nlohmann::ordered_json features_json(const FeatureExport& features, const PipelineConfig& config) {
  nlohmann::ordered_json doc;
  doc["feature_space"] = to_json(features.space);
  doc["columns"] = features.matrix.column_names;
  doc["rows"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < features.matrix.size(); ++i) {
    nlohmann::ordered_json row;
    row["entity_id"] = features.matrix.entity_ids[i];
    row["label"] = label_name(features.matrix.labels[i]);
    row["values"] = features.matrix.rows[i];
    doc["rows"].push_back(std::move(row));
  }
  doc["config"] = config_json(config);
  return doc;
}

Report evaluate(const FeaturizedCohort& data, const PipelineConfig& config) {
  config.validate();
  const auto labels = data.labels();
  const auto cv = config.cv();

  std::vector<Label> predicted(labels.size());
  auto predictions_of = [&](const CrossValidationResult& r) {
    for (std::size_t i = 0; i < labels.size(); ++i) predicted[i] = r.predictions[i].label;
    return predicted;
  };

  Report report;
  report.config = config_json(config);
  const auto baseline = cross_validate(data.entities, config.selection(false), cv, config.tree, config.workers);
  report.runs.push_back(make_run(std::string(kQuantityRun), predictions_of(baseline), labels));

  if (config.with_patterns) {
    const auto combined = cross_validate(data.entities, config.selection(true), cv, config.tree, config.workers);
    report.runs.push_back(make_run(std::string(kCombinedRun), predictions_of(combined), labels));
    const auto& a = report.runs[0];
    const auto& b = report.runs[1];
    // The test is undefined when both runs are all-correct or all-wrong.
    const int correct = a.correct + b.correct;
    const int incorrect = (a.total - a.correct) + (b.total - b.correct);
    if (correct > 0 && incorrect > 0) {
      SignificanceTest test;
      test.pair = a.name + " vs " + b.name;
      test.result =
          chi_squared_2x2({a.correct, a.total - a.correct}, {b.correct, b.total - b.correct}, config.yates);
      report.tests.push_back(std::move(test));
    }
  }
  return report;
}

nlohmann::ordered_json full_tree_json(const FeaturizedCohort& data, const PipelineConfig& config) {
  const auto features = export_features(data, config);
  const auto tree = train(features.matrix, config.tree);
  nlohmann::ordered_json doc;
  doc["columns"] = features.matrix.column_names;
  doc["nodes"] = tree.node_count();
  doc["leaves"] = tree.leaf_count();
  doc["depth"] = tree.depth();
  doc["tree"] = tree.to_json(features.matrix.column_names);
  doc["config"] = config_json(config);
  return doc;
}

}  // namespace tsbib
