#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsbib/ingest.hpp"
#include "tsbib/symbolize.hpp"

namespace tsbib {

/// A change-pattern to induce in TRUE entities.
struct PlantSpec {
  MetricId metric = MetricId::InternationalPapers;
  std::string shape = "Uu";     // over {U,u,S,d,D}
  int years_before_anchor = 3;  // gap between the shape's last year and the anchor
  double noise = 0.0;           // per-symbol probability the plant is skipped

  void validate(int window_length) const;
  /// Symbol index where the shape starts: (window_length - 1) - offset - len(shape).
  int start_index(int window_length) const;
};

struct SynthConfig {
  int n_true = 40;
  int n_false = 40;
  int window_length = 10;
  std::optional<PlantSpec> plant;
  std::uint64_t seed = 42;
  int false_anchor_year = kDefaultFalseAnchorYear;
  int true_anchor_min = 2005;
  int true_anchor_max = 2014;
  SymbolAlphabet alphabet;  // used to verify plants
  /// Relative probabilities of the walk steps -1, 0, +1, +2.
  std::array<double, 4> step_weights = {0.03, 0.90, 0.04, 0.03};

  void validate() const;
};

struct SyntheticData {
  std::vector<Observation> observations;
  std::vector<LabelRecord> labels;
};

/// Balanced labeled cohort. Every series is a non-negative integer random
/// walk (steps -1, 0, +1, +2, floored at 0) from a start level drawn from
/// the same distribution for both classes. For TRUE entities the plant is
/// injected as raw jumps and checked through the symbolizer; draws that do
/// not symbolize to the shape are rejected and redrawn.
SyntheticData generate_cohort(const SynthConfig& config);

void write_observations_csv(std::ostream& out, std::span<const Observation> observations);
/// FALSE rows whose anchor equals default_false_anchor are written with an empty anchor.
void write_labels_csv(std::ostream& out, std::span<const LabelRecord> labels,
                      int default_false_anchor = kDefaultFalseAnchorYear);

}  // namespace tsbib
