#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsbib/ingest.hpp"
#include "tsbib/patterns.hpp"

namespace tsbib {

/// Weight of one pattern for one entity: paf * ln(n_total / pef).
struct PatternScore {
  std::string entity_id;
  std::string pattern;
  int paf = 0;      // occurrences of the pattern in this entity
  int pef = 0;      // entities containing the pattern
  int n_total = 0;  // entities scored together
  double score = 0.0;
};

/// One score per (entity, pattern) with pef taken over the same entity set.
/// Output follows input entity order, patterns ascending within an entity.
std::vector<PatternScore> score_patterns(std::span<const PatternCounts> all_counts);
std::vector<PatternScore> score_patterns(std::span<const PatternCounts* const> all_counts);

inline constexpr std::array<std::string_view, 5> kQuantityFeatureNames = {
    "sum_domestic_papers", "sum_international_papers", "sum_domestic_citations",
    "sum_international_citations", "mean_first_author_ratio"};

struct FeatureSpace {
  std::vector<std::string> patterns;  // unique, ascending

  std::size_t width(bool with_patterns = true) const {
    return (with_patterns ? patterns.size() : 0) + kQuantityFeatureNames.size();
  }
  std::vector<std::string> column_names(bool with_patterns = true) const;

  bool operator==(const FeatureSpace&) const = default;
};

nlohmann::ordered_json to_json(const FeatureSpace& space);
FeatureSpace feature_space_from_json(const nlohmann::json& doc);

/// Per entity the k best patterns (score descending, key ascending on ties),
/// unioned over entities.
FeatureSpace select_top_k(std::span<const PatternScore> scores, int k = 10);

using QuantityVector = std::array<double, 5>;

/// Window sums of the four count metrics and the mean first-author ratio.
QuantityVector quantity_features(const CohortEntity& entity);

enum class FeatureMode { Counts, Binary };

/// Everything the matrix builder needs to know about one entity.
struct EntityFeatures {
  std::string entity_id;
  Label label{};
  QuantityVector quantities{};
  PatternCounts patterns;
};

struct FeatureMatrix {
  std::vector<std::string> column_names;
  std::vector<std::string> entity_ids;
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;

  std::size_t width() const { return column_names.size(); }
  std::size_t size() const { return rows.size(); }
};

/// Pattern columns (absent = 0) followed by the five quantity columns.
/// with_patterns=false gives the quantity-only baseline.
FeatureMatrix build_matrix(std::span<const EntityFeatures> entities, const FeatureSpace& space,
                           FeatureMode mode, bool with_patterns);
FeatureMatrix build_matrix(std::span<const EntityFeatures* const> entities, const FeatureSpace& space,
                           FeatureMode mode, bool with_patterns);

/// Scores the entities' patterns among themselves and keeps the top_k per entity.
FeatureSpace select_features(std::span<const EntityFeatures> entities, int top_k);
FeatureSpace select_features(std::span<const EntityFeatures* const> entities, int top_k);

}  // namespace tsbib
