#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace tsbib {

// Declaration order is the canonical metric order used in pattern keys.
enum class MetricId : std::uint8_t {
  DomesticPapers = 0,
  InternationalPapers,
  DomesticCitations,
  InternationalCitations,
  FirstAuthorRatio,
};

inline constexpr std::size_t kMetricCount = 5;

inline constexpr std::array<MetricId, kMetricCount> kAllMetrics = {
    MetricId::DomesticPapers, MetricId::InternationalPapers,
    MetricId::DomesticCitations, MetricId::InternationalCitations,
    MetricId::FirstAuthorRatio};

constexpr std::size_t metric_index(MetricId m) { return static_cast<std::size_t>(m); }

/// 1-based ordinal as it appears in pattern keys ("m1" .. "m5").
constexpr int metric_ordinal(MetricId m) { return static_cast<int>(m) + 1; }

std::optional<MetricId> metric_from_ordinal(int ordinal);

std::string_view metric_name(MetricId m);
std::optional<MetricId> parse_metric(std::string_view name);

/// The four count metrics are summed for quantity features; the ratio is averaged.
constexpr bool is_count_metric(MetricId m) { return m != MetricId::FirstAuthorRatio; }

}  // namespace tsbib
