#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsbib/crossval.hpp"
#include "tsbib/eval.hpp"
#include "tsbib/ingest.hpp"
#include "tsbib/patterns.hpp"
#include "tsbib/select.hpp"
#include "tsbib/symbolize.hpp"
#include "tsbib/tree.hpp"

namespace tsbib {

struct PipelineConfig {
  int window_length = 10;
  SymbolAlphabet alphabet;  // big_threshold 30, small_threshold 5
  PatternConfig patterns;   // k 1..4, singles on
  int top_k = 10;
  FeatureMode feature_mode = FeatureMode::Counts;
  bool with_patterns = true;
  SelectionScope selection_scope = SelectionScope::PerFold;
  int folds = 10;
  bool stratified = true;
  std::uint64_t seed = 42;
  TreeParams tree;
  bool yates = false;
  int default_false_anchor = kDefaultFalseAnchorYear;
  int workers = 1;  // execution only; never affects outputs

  void validate() const;

  /// Seed used for fold assignment.
  std::uint64_t cv_seed() const { return seed + 1; }
  CVConfig cv() const { return CVConfig{folds, stratified, cv_seed()}; }
  SelectionSettings selection(bool patterns_on) const {
    return SelectionSettings{top_k, feature_mode, patterns_on, selection_scope};
  }
};

/// Sets one field from its snake_case key and textual value. Throws
/// ConfigError for unknown keys or unparsable values.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

/// Applies a flat JSON object of snake_case keys on top of `config`.
void apply_config_json(PipelineConfig& config, const nlohmann::json& doc);
PipelineConfig load_config_file(const std::string& path, PipelineConfig base = {});

/// Effective configuration as echoed into reports (excludes `workers`).
nlohmann::ordered_json config_json(const PipelineConfig& config);

/// Names of every settable key, in echo order.
std::vector<std::string> config_keys();

/// Per-entity symbols, pattern counts and quantity features.
struct FeaturizedCohort {
  std::vector<EntityFeatures> entities;  // cohort order
  std::vector<std::array<std::string, kMetricCount>> symbols;

  std::vector<Label> labels() const;
};

FeaturizedCohort featurize(const Cohort& cohort, const PipelineConfig& config);

/// Feature space chosen on the whole cohort plus the resulting matrix.
struct FeatureExport {
  FeatureSpace space;
  FeatureMatrix matrix;
};

FeatureExport export_features(const FeaturizedCohort& data, const PipelineConfig& config,
                              const std::optional<FeatureSpace>& fixed_space = std::nullopt);
nlohmann::ordered_json features_json(const FeatureExport& features, const PipelineConfig& config);

inline constexpr std::string_view kQuantityRun = "quantity";
inline constexpr std::string_view kCombinedRun = "time_series_and_quantity";

/// Cross-validates the quantity baseline and, when patterns are enabled, the
/// combined configuration, then compares their correct/incorrect counts.
Report evaluate(const FeaturizedCohort& data, const PipelineConfig& config);

/// Tree trained on the whole cohort with globally selected features.
nlohmann::ordered_json full_tree_json(const FeaturizedCohort& data, const PipelineConfig& config);

}  // namespace tsbib
