#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsbib/metric.hpp"

namespace tsbib {

/// Order of the second gram's start relative to the first's.
enum class Relation : char { After = '+', Same = '=', Before = '-' };

/// A contiguous run of symbols from one metric's sequence.
struct KGram {
  MetricId metric{};
  std::string symbols;
  int start = 0;

  bool operator==(const KGram&) const = default;
};

struct PatternConfig {
  int k_min = 1;
  int k_max = 4;
  bool include_singles = true;

  void validate() const;
};

/// Symbol sequence of one metric for one entity.
struct MetricSymbols {
  MetricId metric{};
  std::string symbols;
};

using PatternCountMap = std::map<std::string, int, std::less<>>;

struct PatternCounts {
  std::string entity_id;
  PatternCountMap counts;  // only keys with count >= 1
};

/// Parsed form of a pattern key. `second` is set only for combined patterns.
struct PatternParts {
  MetricId first_metric{};
  std::string first_symbols;
  struct Second {
    Relation relation{};
    MetricId metric{};
    std::string symbols;
    bool operator==(const Second&) const = default;
  };
  std::optional<Second> second;

  bool operator==(const PatternParts&) const = default;
};

/// "m<i>:<symbols>"
std::string single_key(MetricId metric, std::string_view symbols);

/// Canonical combined key: the lower-indexed metric goes first and the
/// relation is taken after that reordering.
std::string combine_pair(const KGram& a, const KGram& b);

std::string format_pattern_key(const PatternParts& parts);
std::optional<PatternParts> parse_pattern_key(std::string_view key);

/// Every substring of length k_min..k_max with its start index, shortest
/// lengths first. k_max is capped at the sequence length.
std::vector<KGram> extract_kgrams(MetricId metric, std::string_view sequence, int k_min, int k_max);

/// Single-metric grams (optional) plus every cross-metric gram pair for
/// each unordered metric pair. A key's count is the number of occurrence
/// pairs producing it.
PatternCounts count_patterns(std::string entity_id, std::span<const MetricSymbols> metrics,
                             const PatternConfig& config);

}  // namespace tsbib
