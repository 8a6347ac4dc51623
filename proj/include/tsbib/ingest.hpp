#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsbib/metric.hpp"

namespace tsbib {

enum class Label : std::uint8_t { False = 0, True = 1 };

std::string_view label_name(Label label);  // "TRUE" / "FALSE"

struct Observation {
  std::string entity_id;
  MetricId metric{};
  int year = 0;
  double value = 0.0;

  bool operator==(const Observation&) const = default;
};

struct LabelRecord {
  std::string entity_id;
  Label label{};
  int anchor_year = 0;

  bool operator==(const LabelRecord&) const = default;
};

inline constexpr int kDefaultFalseAnchorYear = 2014;

/// Yearly values of one (entity, metric) pair, oldest year first.
using MetricSeries = std::vector<double>;

struct CohortEntity {
  std::string entity_id;
  Label label{};
  int anchor_year = 0;
  std::array<MetricSeries, kMetricCount> series;

  const MetricSeries& operator[](MetricId m) const { return series[metric_index(m)]; }
};

struct Cohort {
  int window_length = 10;
  std::vector<CohortEntity> entities;  // sorted by entity_id
  std::size_t skipped_unlabeled = 0;   // entities with observations but no label

  std::size_t count(Label label) const;
};

// CSV loaders. Errors are reported as DataError naming the source and line.
std::vector<Observation> parse_observations(std::istream& in, std::string_view source = "<stream>");
std::vector<Observation> load_observations(const std::filesystem::path& path);

std::vector<LabelRecord> parse_labels(std::istream& in, std::string_view source = "<stream>",
                                      int default_false_anchor = kDefaultFalseAnchorYear);
std::vector<LabelRecord> load_labels(const std::filesystem::path& path,
                                     int default_false_anchor = kDefaultFalseAnchorYear);

/// Aligns every labeled entity onto the window_length years strictly before
/// its anchor year. Missing years are zero-filled.
Cohort build_cohort(std::span<const Observation> observations,
                    std::span<const LabelRecord> labels, int window_length);

/// Per-year 100 * first / total; a zero total yields 0.
MetricSeries derive_ratio_metric(std::span<const double> first_author_counts,
                                 std::span<const double> total_counts);

}  // namespace tsbib
