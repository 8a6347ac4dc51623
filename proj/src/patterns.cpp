#include "tsbib/patterns.hpp"

#include <algorithm>

#include "tsbib/errors.hpp"
#include "tsbib/symbolize.hpp"

namespace tsbib {

namespace {

Relation relation_of(int first_start, int second_start) {
  if (second_start > first_start) return Relation::After;
  if (second_start < first_start) return Relation::Before;
  return Relation::Same;
}

std::optional<std::pair<MetricId, std::string>> parse_single(std::string_view s) {
  if (s.size() < 4 || s[0] != 'm' || s[2] != ':') return std::nullopt;
  const auto metric = metric_from_ordinal(s[1] - '0');
  if (!metric) return std::nullopt;
  const auto symbols = s.substr(3);
  if (!std::all_of(symbols.begin(), symbols.end(), is_symbol)) return std::nullopt;
  return std::pair{*metric, std::string(symbols)};
}

}  // namespace

void PatternConfig::validate() const {
  if (k_min < 1 || k_max < k_min) throw ConfigError("k range must satisfy 1 <= k_min <= k_max");
}

std::string single_key(MetricId metric, std::string_view symbols) {
  std::string key;
  key.reserve(3 + symbols.size());
  key += 'm';
  key += static_cast<char>('0' + metric_ordinal(metric));
  key += ':';
  key += symbols;
  return key;
}

std::string combine_pair(const KGram& a, const KGram& b) {
  if (a.metric == b.metric) throw Error("combine_pair: both grams come from the same metric");
  const KGram& first = a.metric < b.metric ? a : b;
  const KGram& second = a.metric < b.metric ? b : a;
  return single_key(first.metric, first.symbols) + static_cast<char>(relation_of(first.start, second.start)) +
         single_key(second.metric, second.symbols);
}

std::string format_pattern_key(const PatternParts& parts) {
  std::string key = single_key(parts.first_metric, parts.first_symbols);
  if (parts.second) {
    key += static_cast<char>(parts.second->relation);
    key += single_key(parts.second->metric, parts.second->symbols);
  }
  return key;
}

std::optional<PatternParts> parse_pattern_key(std::string_view key) {
  // Relation characters never occur inside a single key, so the first one
  // found splits a combined key.
  const auto split = key.find_first_of("+=-");
  PatternParts parts;
  const auto head = parse_single(key.substr(0, split));
  if (!head) return std::nullopt;
  parts.first_metric = head->first;
  parts.first_symbols = head->second;
  if (split == std::string_view::npos) return parts;

  const auto tail = parse_single(key.substr(split + 1));
  if (!tail || tail->first <= head->first) return std::nullopt;
  parts.second = PatternParts::Second{static_cast<Relation>(key[split]), tail->first, tail->second};
  return parts;
}

std::vector<KGram> extract_kgrams(MetricId metric, std::string_view sequence, int k_min, int k_max) {
  if (k_min < 1 || k_max < k_min) throw Error("extract_kgrams: need 1 <= k_min <= k_max");
  const int length = static_cast<int>(sequence.size());
  if (k_min > length) {
    throw Error("extract_kgrams: k_min " + std::to_string(k_min) + " exceeds sequence length " +
                std::to_string(length));
  }
  const int top = std::min(k_max, length);
  std::vector<KGram> grams;
  for (int k = k_min; k <= top; ++k) {
    for (int start = 0; start + k <= length; ++start) {
      grams.push_back(KGram{metric, std::string(sequence.substr(static_cast<std::size_t>(start),
                                                                static_cast<std::size_t>(k))),
                            start});
    }
  }
  return grams;
}

PatternCounts count_patterns(std::string entity_id, std::span<const MetricSymbols> metrics,
                             const PatternConfig& config) {
  config.validate();
  std::vector<const MetricSymbols*> ordered;
  for (const auto& m : metrics) ordered.push_back(&m);
  std::sort(ordered.begin(), ordered.end(),
            [](const MetricSymbols* x, const MetricSymbols* y) { return x->metric < y->metric; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i - 1]->metric == ordered[i]->metric) {
      throw Error("count_patterns: metric '" + std::string(metric_name(ordered[i]->metric)) + "' given twice");
    }
  }

  struct Gram {
    std::string key;
    int start;
  };
  std::vector<std::vector<Gram>> grams(ordered.size());
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (auto& g : extract_kgrams(ordered[i]->metric, ordered[i]->symbols, config.k_min, config.k_max)) {
      grams[i].push_back(Gram{single_key(g.metric, g.symbols), g.start});
    }
  }

  PatternCounts result;
  result.entity_id = std::move(entity_id);
  auto& counts = result.counts;
  if (config.include_singles) {
    for (const auto& per_metric : grams) {
      for (const auto& g : per_metric) ++counts[g.key];
    }
  }
  std::string key;
  for (std::size_t i = 0; i < grams.size(); ++i) {
    for (std::size_t j = i + 1; j < grams.size(); ++j) {
      for (const auto& a : grams[i]) {
        for (const auto& b : grams[j]) {
          key.assign(a.key);
          key += static_cast<char>(relation_of(a.start, b.start));
          key += b.key;
          auto it = counts.find(key);
          if (it == counts.end()) {
            counts.emplace(key, 1);
          } else {
            ++it->second;
          }
        }
      }
    }
  }
  return result;
}

}  // namespace tsbib
