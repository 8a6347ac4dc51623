#include "tsbib/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "tsbib/errors.hpp"

namespace tsbib {

namespace {

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_double(std::string_view s, double& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

// Reads lines, checks the header and hands every non-blank data line to fn
// together with its 1-based line number.
template <typename Fn>
void for_each_row(std::istream& in, std::string_view source, std::string_view header, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = trim(view);
    if (view.empty()) continue;
    if (!seen_header) {
      if (view != header) {
        throw DataError(where(source, line_no) + ": expected header '" + std::string(header) +
                        "', got '" + std::string(view) + "'");
      }
      seen_header = true;
      continue;
    }
    fn(view, line_no);
  }
  if (!seen_header) throw DataError(std::string(source) + ": missing header '" + std::string(header) + "'");
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

std::string_view label_name(Label label) { return label == Label::True ? "TRUE" : "FALSE"; }

std::size_t Cohort::count(Label label) const {
  std::size_t n = 0;
  for (const auto& e : entities) n += e.label == label ? 1 : 0;
  return n;
}

std::vector<Observation> parse_observations(std::istream& in, std::string_view source) {
  std::vector<Observation> out;
  std::map<std::tuple<std::string, MetricId, int>, std::size_t> seen;
  for_each_row(in, source, "entity_id,metric,year,value", [&](std::string_view row, std::size_t line) {
    const auto fields = split_fields(row);
    if (fields.size() != 4) {
      throw DataError(where(source, line) + ": malformed row at line " + std::to_string(line) +
                      " (expected 4 fields, got " + std::to_string(fields.size()) + ")");
    }
    Observation obs;
    obs.entity_id = std::string(trim(fields[0]));
    if (obs.entity_id.empty()) {
      throw DataError(where(source, line) + ": malformed row at line " + std::to_string(line) + " (empty entity_id)");
    }
    const auto metric = parse_metric(trim(fields[1]));
    if (!metric) {
      throw DataError(where(source, line) + ": unknown metric '" + std::string(trim(fields[1])) +
                      "' at line " + std::to_string(line));
    }
    obs.metric = *metric;
    if (!parse_int(trim(fields[2]), obs.year)) {
      throw DataError(where(source, line) + ": malformed row at line " + std::to_string(line) + " (bad year)");
    }
    if (!parse_double(trim(fields[3]), obs.value)) {
      throw DataError(where(source, line) + ": malformed row at line " + std::to_string(line) + " (bad value)");
    }
    if (obs.value < 0.0) {
      throw DataError(where(source, line) + ": negative value at line " + std::to_string(line));
    }
    if (obs.metric == MetricId::FirstAuthorRatio && obs.value > 100.0) {
      throw DataError(where(source, line) + ": first_author_ratio above 100 at line " + std::to_string(line));
    }
    auto [it, inserted] = seen.try_emplace({obs.entity_id, obs.metric, obs.year}, line);
    if (!inserted) {
      throw DataError(where(source, line) + ": duplicate (" + obs.entity_id + ", " +
                      std::string(metric_name(obs.metric)) + ", " + std::to_string(obs.year) +
                      ") at lines " + std::to_string(it->second) + " and " + std::to_string(line));
    }
    out.push_back(std::move(obs));
  });
  return out;
}

std::vector<Observation> load_observations(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_observations(in, path.string());
}

std::vector<LabelRecord> parse_labels(std::istream& in, std::string_view source, int default_false_anchor) {
  std::vector<LabelRecord> out;
  std::unordered_map<std::string, std::size_t> seen;
  for_each_row(in, source, "entity_id,label,anchor_year", [&](std::string_view row, std::size_t line) {
    const auto fields = split_fields(row);
    if (fields.size() != 3) {
      throw DataError(where(source, line) + ": malformed row at line " + std::to_string(line) +
                      " (expected 3 fields, got " + std::to_string(fields.size()) + ")");
    }
    LabelRecord rec;
    rec.entity_id = std::string(trim(fields[0]));
    if (rec.entity_id.empty()) {
      throw DataError(where(source, line) + ": malformed row at line " + std::to_string(line) + " (empty entity_id)");
    }
    const auto token = trim(fields[1]);
    if (token == "TRUE") {
      rec.label = Label::True;
    } else if (token == "FALSE") {
      rec.label = Label::False;
    } else {
      throw DataError(where(source, line) + ": unknown label '" + std::string(token) + "' at line " +
                      std::to_string(line));
    }
    const auto anchor = trim(fields[2]);
    if (anchor.empty()) {
      if (rec.label == Label::True) {
        throw DataError(where(source, line) + ": TRUE row missing anchor_year at line " + std::to_string(line));
      }
      rec.anchor_year = default_false_anchor;
    } else if (!parse_int(anchor, rec.anchor_year)) {
      throw DataError(where(source, line) + ": malformed row at line " + std::to_string(line) + " (bad anchor_year)");
    }
    auto [it, inserted] = seen.try_emplace(rec.entity_id, line);
    if (!inserted) {
      throw DataError(where(source, line) + ": duplicate entity_id '" + rec.entity_id + "' at lines " +
                      std::to_string(it->second) + " and " + std::to_string(line));
    }
    out.push_back(std::move(rec));
  });
  return out;
}

std::vector<LabelRecord> load_labels(const std::filesystem::path& path, int default_false_anchor) {
  auto in = open_or_throw(path);
  return parse_labels(in, path.string(), default_false_anchor);
}

Cohort build_cohort(std::span<const Observation> observations, std::span<const LabelRecord> labels,
                    int window_length) {
  if (window_length < 2) throw ConfigError("window_length must be >= 2");

  std::map<std::string, const LabelRecord*, std::less<>> by_id;
  for (const auto& rec : labels) {
    if (!by_id.emplace(rec.entity_id, &rec).second) {
      throw DataError("duplicate label for entity '" + rec.entity_id + "'");
    }
  }

  Cohort cohort;
  cohort.window_length = window_length;
  std::map<std::string_view, std::size_t> slot;
  for (const auto& [id, rec] : by_id) {
    CohortEntity entity;
    entity.entity_id = id;
    entity.label = rec->label;
    entity.anchor_year = rec->anchor_year;
    for (auto& s : entity.series) s.assign(static_cast<std::size_t>(window_length), 0.0);
    slot.emplace(rec->entity_id, cohort.entities.size());
    cohort.entities.push_back(std::move(entity));
  }

  std::vector<bool> has_observation(cohort.entities.size(), false);
  std::set<std::string_view> unlabeled;
  for (const auto& obs : observations) {
    const auto it = slot.find(obs.entity_id);
    if (it == slot.end()) {
      unlabeled.insert(obs.entity_id);
      continue;
    }
    has_observation[it->second] = true;
    auto& entity = cohort.entities[it->second];
    const int first_year = entity.anchor_year - window_length;
    const int offset = obs.year - first_year;
    if (offset < 0 || offset >= window_length) continue;
    entity.series[metric_index(obs.metric)][static_cast<std::size_t>(offset)] = obs.value;
  }
  for (std::size_t i = 0; i < cohort.entities.size(); ++i) {
    if (!has_observation[i]) {
      throw DataError("labeled entity '" + cohort.entities[i].entity_id + "' has no observations");
    }
  }
  cohort.skipped_unlabeled = unlabeled.size();
  return cohort;
}

MetricSeries derive_ratio_metric(std::span<const double> first_author_counts, std::span<const double> total_counts) {
  if (first_author_counts.size() != total_counts.size()) {
    throw DataError("derive_ratio_metric: series lengths differ");
  }
  MetricSeries out(first_author_counts.size(), 0.0);
  for (std::size_t t = 0; t < out.size(); ++t) {
    const double first = first_author_counts[t];
    const double total = total_counts[t];
    if (first > total) {
      throw DataError("derive_ratio_metric: first-author count exceeds total at index " + std::to_string(t));
    }
    out[t] = total > 0.0 ? 100.0 * first / total : 0.0;
  }
  return out;
}

}  // namespace tsbib
