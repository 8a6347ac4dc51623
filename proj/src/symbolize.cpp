#include "tsbib/symbolize.hpp"

#include <algorithm>
#include <cmath>

#include "tsbib/errors.hpp"

namespace tsbib {

void SymbolAlphabet::validate() const {
  if (!(small_threshold > 0.0 && small_threshold < big_threshold && big_threshold <= 100.0)) {
    throw ConfigError("symbol thresholds must satisfy 0 < small_threshold < big_threshold <= 100");
  }
}

std::vector<double> normalize(std::span<const double> raw) {
  if (raw.size() < 2) throw Error("normalize: series needs at least 2 values");
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double min = *lo;
  const double range = *hi - min;
  std::vector<double> out(raw.size(), 0.0);
  if (range <= 0.0) return out;
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = 100.0 * (raw[i] - min) / range;
  return out;
}

char classify_change(double diff, const SymbolAlphabet& alphabet) {
  if (diff > alphabet.big_threshold) return kBigRise;
  if (diff > alphabet.small_threshold) return kSmallRise;
  if (diff >= -alphabet.small_threshold) return kSteady;
  if (diff >= -alphabet.big_threshold) return kSmallFall;
  return kBigFall;
}

std::string symbolize_diffs(std::span<const double> normalized, std::span<const double> raw,
                            const SymbolAlphabet& alphabet) {
  if (normalized.size() != raw.size()) throw Error("symbolize_diffs: normalized and raw lengths differ");
  if (raw.size() < 2) throw Error("symbolize_diffs: series needs at least 2 values");
  std::string out;
  out.reserve(raw.size() - 1);
  for (std::size_t t = 1; t < raw.size(); ++t) {
    out.push_back(raw[t - 1] == 0.0 && raw[t] == 0.0 ? kNoActivity
                                                     : classify_change(normalized[t] - normalized[t - 1], alphabet));
  }
  return out;
}

std::string symbolize(std::span<const double> raw, const SymbolAlphabet& alphabet) {
  if (raw.size() < 2) throw Error("symbolize: series needs at least 2 values");
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double range = *hi - *lo;
  std::string out;
  out.reserve(raw.size() - 1);
  for (std::size_t t = 1; t < raw.size(); ++t) {
    if (raw[t - 1] == 0.0 && raw[t] == 0.0) {
      out.push_back(kNoActivity);
    } else {
      const double diff = range > 0.0 ? 100.0 * (raw[t] - raw[t - 1]) / range : 0.0;
      out.push_back(classify_change(diff, alphabet));
    }
  }
  return out;
}

}  // namespace tsbib
