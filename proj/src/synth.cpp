#include "tsbib/synth.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "tsbib/errors.hpp"
#include "tsbib/random.hpp"

namespace tsbib {

namespace {

constexpr int kMaxPlantAttempts = 1000;
constexpr double kMinPlantRange = 40.0;
constexpr std::array<int, 4> kWalkSteps = {-1, 0, 1, 2};

struct WalkShape {
  int start_min;
  int start_max;
  double step_scale;
  double ceiling;
};

// Start levels are wide relative to the walk so that window sums of the two
// classes overlap heavily.
WalkShape walk_shape(MetricId m) {
  switch (m) {
    case MetricId::DomesticPapers: return {0, 30, 1.0, 1e9};
    case MetricId::InternationalPapers: return {0, 40, 1.0, 1e9};
    case MetricId::DomesticCitations: return {0, 60, 1.0, 1e9};
    case MetricId::InternationalCitations: return {0, 120, 1.0, 1e9};
    case MetricId::FirstAuthorRatio: return {2, 18, 5.0, 100.0};  // start 10..90 in steps of 5
  }
  return {0, 30, 1.0, 1e9};
}

struct Walk {
  double start = 0.0;
  std::vector<double> steps;
};

int draw_step(Rng& rng, const std::array<double, 4>& weights) {
  const double total = weights[0] + weights[1] + weights[2] + weights[3];
  double u = uniform_unit(rng) * total;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (u < weights[k]) return kWalkSteps[k];
    u -= weights[k];
  }
  return kWalkSteps.back();
}

Walk draw_walk(Rng& rng, MetricId metric, int window_length, const std::array<double, 4>& weights) {
  const auto shape = walk_shape(metric);
  Walk walk;
  walk.start = static_cast<double>(uniform_int(rng, shape.start_min, shape.start_max)) * shape.step_scale;
  walk.steps.resize(static_cast<std::size_t>(window_length - 1));
  for (auto& s : walk.steps) s = draw_step(rng, weights) * shape.step_scale;
  return walk;
}

std::vector<double> realize(const Walk& walk, double ceiling) {
  std::vector<double> values;
  values.reserve(walk.steps.size() + 1);
  double v = walk.start;
  values.push_back(v);
  for (double s : walk.steps) {
    v = std::clamp(v + s, 0.0, ceiling);
    values.push_back(v);
  }
  return values;
}

// Raw jump sizes for a shape given the baseline's range, aiming for big
// moves near 60% and small moves near 15% of the final range.
std::array<double, 2> jump_sizes(std::string_view shape, double baseline_range, double step_scale) {
  const auto big = static_cast<double>(std::count_if(shape.begin(), shape.end(), [](char c) { return c == 'U' || c == 'D'; }));
  const auto small = static_cast<double>(std::count_if(shape.begin(), shape.end(), [](char c) { return c == 'u' || c == 'd'; }));
  const double r = std::max(baseline_range, 2.0 * step_scale);
  double final_range = r / std::max(0.1, 1.0 - 0.6 * big - 0.15 * small);
  // Only big moves can stretch the range; small ones must stay small relative to it.
  if (big > 0) final_range = std::max(final_range, kMinPlantRange * step_scale);
  const double round_to = step_scale;
  const auto snap = [&](double x) { return std::max(round_to, std::round(x / round_to) * round_to); };
  return {snap(0.6 * final_range), snap(0.15 * final_range)};
}

double planted_step(char symbol, const std::array<double, 2>& jumps) {
  switch (symbol) {
    case 'U': return jumps[0];
    case 'u': return jumps[1];
    case 'd': return -jumps[1];
    case 'D': return -jumps[0];
    default: return 0.0;
  }
}

std::string format_value(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void PlantSpec::validate(int window_length) const {
  if (shape.empty()) throw ConfigError("plant shape must not be empty");
  for (char c : shape) {
    if (c != 'U' && c != 'u' && c != 'S' && c != 'd' && c != 'D') {
      throw ConfigError(std::string("plant shape symbol '") + c + "' is not one of U,u,S,d,D");
    }
  }
  if (years_before_anchor < 0) throw ConfigError("plant offset must be >= 0");
  if (years_before_anchor + static_cast<int>(shape.size()) > window_length - 1) {
    throw ConfigError("infeasible plant: offset + shape length exceeds window_length - 1");
  }
  if (!(noise >= 0.0 && noise <= 1.0)) throw ConfigError("plant noise must be in [0, 1]");
}

int PlantSpec::start_index(int window_length) const {
  return (window_length - 1) - years_before_anchor - static_cast<int>(shape.size());
}

void SynthConfig::validate() const {
  if (n_true < 1 || n_false < 1) throw ConfigError("n_true and n_false must be >= 1");
  if (window_length < 2) throw ConfigError("window_length must be >= 2");
  if (true_anchor_min > true_anchor_max) throw ConfigError("true_anchor_min exceeds true_anchor_max");
  double weight_sum = 0.0;
  for (double w : step_weights) {
    if (!(w >= 0.0)) throw ConfigError("step weights must be non-negative");
    weight_sum += w;
  }
  if (!(weight_sum > 0.0)) throw ConfigError("step weights must not all be zero");
  alphabet.validate();
  if (plant) plant->validate(window_length);
}

SyntheticData generate_cohort(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SyntheticData data;
  const int total = config.n_true + config.n_false;
  const int id_width = std::max(3, static_cast<int>(std::to_string(total).size()));

  for (int i = 0; i < total; ++i) {
    std::string id = std::to_string(i + 1);
    id = "r" + std::string(static_cast<std::size_t>(std::max(0, id_width - static_cast<int>(id.size()))), '0') + id;
    const Label label = i < config.n_true ? Label::True : Label::False;
    const int anchor = label == Label::True
                           ? static_cast<int>(uniform_int(rng, config.true_anchor_min, config.true_anchor_max))
                           : config.false_anchor_year;
    data.labels.push_back(LabelRecord{id, label, anchor});

    std::array<std::vector<double>, kMetricCount> series;
    for (MetricId m : kAllMetrics) {
      const auto shape = walk_shape(m);
      const bool planted = label == Label::True && config.plant && config.plant->metric == m;
      if (!planted) {
        series[metric_index(m)] = realize(draw_walk(rng, m, config.window_length, config.step_weights), shape.ceiling);
        continue;
      }

      const auto& plant = *config.plant;
      const int start = plant.start_index(config.window_length);
      std::vector<bool> applied(plant.shape.size());
      for (std::size_t k = 0; k < plant.shape.size(); ++k) applied[k] = !(uniform_unit(rng) < plant.noise);

      std::string applied_shape;
      for (std::size_t k = 0; k < plant.shape.size(); ++k) {
        if (applied[k]) applied_shape += plant.shape[k];
      }

      bool ok = false;
      for (int attempt = 0; attempt < kMaxPlantAttempts && !ok; ++attempt) {
        Walk walk = draw_walk(rng, m, config.window_length, config.step_weights);
        const auto baseline = realize(walk, shape.ceiling);
        const auto [lo, hi] = std::minmax_element(baseline.begin(), baseline.end());
        const auto jumps = jump_sizes(applied_shape, *hi - *lo, shape.step_scale);
        for (std::size_t k = 0; k < plant.shape.size(); ++k) {
          if (applied[k]) walk.steps[static_cast<std::size_t>(start) + k] = planted_step(plant.shape[k], jumps);
        }
        auto values = realize(walk, shape.ceiling);
        const auto symbols = symbolize(values, config.alphabet);
        ok = true;
        for (std::size_t k = 0; k < plant.shape.size(); ++k) {
          if (applied[k] && symbols[static_cast<std::size_t>(start) + k] != plant.shape[k]) ok = false;
        }
        if (ok) series[metric_index(m)] = std::move(values);
      }
      if (!ok) {
        throw ConfigError("infeasible plant: could not induce '" + plant.shape + "' in " +
                          std::string(metric_name(m)) + " after " + std::to_string(kMaxPlantAttempts) +
                          " attempts");
      }
    }

    const int first_year = anchor - config.window_length;
    for (MetricId m : kAllMetrics) {
      const auto& values = series[metric_index(m)];
      for (int t = 0; t < config.window_length; ++t) {
        data.observations.push_back(Observation{id, m, first_year + t, values[static_cast<std::size_t>(t)]});
      }
    }
  }
  return data;
}

void write_observations_csv(std::ostream& out, std::span<const Observation> observations) {
  out << "entity_id,metric,year,value\n";
  for (const auto& o : observations) {
    out << o.entity_id << ',' << metric_name(o.metric) << ',' << o.year << ',' << format_value(o.value) << '\n';
  }
}

void write_labels_csv(std::ostream& out, std::span<const LabelRecord> labels, int default_false_anchor) {
  out << "entity_id,label,anchor_year\n";
  for (const auto& l : labels) {
    out << l.entity_id << ',' << label_name(l.label) << ',';
    if (!(l.label == Label::False && l.anchor_year == default_false_anchor)) out << l.anchor_year;
    out << '\n';
  }
}

}  // namespace tsbib
