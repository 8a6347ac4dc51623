#include "tsbib/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "tsbib/errors.hpp"

namespace tsbib {

namespace {

// Relative tolerance under which two scores count as tied. Scores such as
// 2*ln(4) and 4*ln(2) are equal in exact arithmetic but not always in
// floating point; treating them as ties keeps the lexicographic tie-break
// in charge and makes selection independent of the log base.
constexpr double kTieTolerance = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<PatternScore> score_patterns(std::span<const PatternCounts> all_counts) {
  std::vector<const PatternCounts*> refs;
  refs.reserve(all_counts.size());
  for (const auto& c : all_counts) refs.push_back(&c);
  return score_patterns(std::span<const PatternCounts* const>(refs));
}

std::vector<PatternScore> score_patterns(std::span<const PatternCounts* const> all_counts) {
  std::unordered_map<std::string_view, int> pef;
  for (const PatternCounts* entity_ptr : all_counts) {
    const auto& entity = *entity_ptr;
    for (const auto& [key, count] : entity.counts) {
      if (count >= 1) ++pef[key];
    }
  }
  const int n_total = static_cast<int>(all_counts.size());
  std::vector<PatternScore> scores;
  for (const PatternCounts* entity_ptr : all_counts) {
    const auto& entity = *entity_ptr;
    for (const auto& [key, count] : entity.counts) {
      if (count < 1) continue;
      const int df = pef.at(key);
      PatternScore s{entity.entity_id, key, count, df, n_total, 0.0};
      s.score = df == n_total ? 0.0 : count * std::log(static_cast<double>(n_total) / df);
      scores.push_back(std::move(s));
    }
  }
  return scores;
}

std::vector<std::string> FeatureSpace::column_names(bool with_patterns) const {
  std::vector<std::string> names;
  if (with_patterns) names = patterns;
  for (auto q : kQuantityFeatureNames) names.emplace_back(q);
  return names;
}

nlohmann::ordered_json to_json(const FeatureSpace& space) {
  nlohmann::ordered_json doc;
  doc["patterns"] = space.patterns;
  doc["quantity_features"] = kQuantityFeatureNames;
  return doc;
}

FeatureSpace feature_space_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("patterns") || !doc["patterns"].is_array()) {
    throw DataError("feature space JSON needs a 'patterns' array");
  }
  FeatureSpace space;
  for (const auto& item : doc["patterns"]) {
    if (!item.is_string() || !parse_pattern_key(item.get<std::string>())) {
      throw DataError("feature space JSON contains an invalid pattern key: " + item.dump());
    }
    space.patterns.push_back(item.get<std::string>());
  }
  std::sort(space.patterns.begin(), space.patterns.end());
  space.patterns.erase(std::unique(space.patterns.begin(), space.patterns.end()), space.patterns.end());
  return space;
}

FeatureSpace select_top_k(std::span<const PatternScore> scores, int k) {
  if (k < 1) throw ConfigError("top_k must be >= 1");

  std::unordered_map<std::string_view, std::vector<const PatternScore*>> by_entity;
  for (const auto& s : scores) by_entity[s.entity_id].push_back(&s);

  std::set<std::string> chosen;
  for (auto& [entity, items] : by_entity) {
    std::sort(items.begin(), items.end(),
              [](const PatternScore* a, const PatternScore* b) { return a->score > b->score; });
    // Re-sort runs of (nearly) equal scores by key.
    for (std::size_t begin = 0; begin < items.size();) {
      std::size_t end = begin + 1;
      while (end < items.size() && nearly_equal(items[end - 1]->score, items[end]->score)) ++end;
      std::sort(items.begin() + static_cast<std::ptrdiff_t>(begin), items.begin() + static_cast<std::ptrdiff_t>(end),
                [](const PatternScore* a, const PatternScore* b) { return a->pattern < b->pattern; });
      begin = end;
    }
    const std::size_t take = std::min(items.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < take; ++i) chosen.insert(items[i]->pattern);
  }
  return FeatureSpace{{chosen.begin(), chosen.end()}};
}

QuantityVector quantity_features(const CohortEntity& entity) {
  QuantityVector q{};
  for (MetricId m : kAllMetrics) {
    const auto& series = entity[m];
    const double sum = std::accumulate(series.begin(), series.end(), 0.0);
    q[metric_index(m)] = is_count_metric(m) ? sum : (series.empty() ? 0.0 : sum / static_cast<double>(series.size()));
  }
  return q;
}

namespace {

template <typename T>
std::vector<const T*> addresses(std::span<const T> items) {
  std::vector<const T*> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(&item);
  return out;
}

}  // namespace

FeatureMatrix build_matrix(std::span<const EntityFeatures> entities, const FeatureSpace& space, FeatureMode mode,
                           bool with_patterns) {
  return build_matrix(addresses(entities), space, mode, with_patterns);
}

FeatureMatrix build_matrix(std::span<const EntityFeatures* const> entities, const FeatureSpace& space,
                           FeatureMode mode, bool with_patterns) {
  FeatureMatrix matrix;
  matrix.column_names = space.column_names(with_patterns);
  const std::size_t width = matrix.column_names.size();
  matrix.rows.reserve(entities.size());
  for (const EntityFeatures* entity : entities) {
    const auto& e = *entity;
    std::vector<double> row;
    row.reserve(width);
    if (with_patterns) {
      for (const auto& key : space.patterns) {
        const auto it = e.patterns.counts.find(key);
        const int count = it == e.patterns.counts.end() ? 0 : it->second;
        row.push_back(mode == FeatureMode::Binary ? (count >= 1 ? 1.0 : 0.0) : static_cast<double>(count));
      }
    }
    row.insert(row.end(), e.quantities.begin(), e.quantities.end());
    matrix.rows.push_back(std::move(row));
    matrix.entity_ids.push_back(e.entity_id);
    matrix.labels.push_back(e.label);
  }
  return matrix;
}

FeatureSpace select_features(std::span<const EntityFeatures> entities, int top_k) {
  return select_features(addresses(entities), top_k);
}

FeatureSpace select_features(std::span<const EntityFeatures* const> entities, int top_k) {
  std::vector<const PatternCounts*> counts;
  counts.reserve(entities.size());
  for (const EntityFeatures* e : entities) counts.push_back(&e->patterns);
  return select_top_k(score_patterns(counts), top_k);
}

}  // namespace tsbib
