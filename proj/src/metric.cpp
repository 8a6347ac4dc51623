#include "tsbib/metric.hpp"

namespace tsbib {

namespace {
constexpr std::array<std::string_view, kMetricCount> kNames = {
    "domestic_papers", "international_papers", "domestic_citations",
    "international_citations", "first_author_ratio"};
}

std::string_view metric_name(MetricId m) { return kNames[metric_index(m)]; }

std::optional<MetricId> parse_metric(std::string_view name) {
  for (MetricId m : kAllMetrics) {
    if (kNames[metric_index(m)] == name) return m;
  }
  return std::nullopt;
}

std::optional<MetricId> metric_from_ordinal(int ordinal) {
  if (ordinal < 1 || ordinal > static_cast<int>(kMetricCount)) return std::nullopt;
  return kAllMetrics[static_cast<std::size_t>(ordinal - 1)];
}

}  // namespace tsbib
