#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tsbib {

// Year-over-year change symbols.
inline constexpr char kBigRise = 'U';
inline constexpr char kSmallRise = 'u';
inline constexpr char kSteady = 'S';
inline constexpr char kSmallFall = 'd';
inline constexpr char kBigFall = 'D';
inline constexpr char kNoActivity = '0';

inline constexpr std::string_view kSymbols = "UuSdD0";

constexpr bool is_symbol(char c) { return kSymbols.find(c) != std::string_view::npos; }

/// Thresholds in normalized points (the series is scaled to [0, 100]).
struct SymbolAlphabet {
  double big_threshold = 30.0;
  double small_threshold = 5.0;

  /// Throws ConfigError unless 0 < small < big <= 100.
  void validate() const;
};

/// Min-max scaling to [0, 100]; a constant series maps to all zeros.
std::vector<double> normalize(std::span<const double> raw);

/// Symbol for a normalized difference, ignoring the no-activity rule.
char classify_change(double diff, const SymbolAlphabet& alphabet);

/// One symbol per consecutive pair of already-normalized values. Two
/// consecutive raw zeros give '0', otherwise the normalized difference is
/// classified by classify_change.
std::string symbolize_diffs(std::span<const double> normalized, std::span<const double> raw,
                            const SymbolAlphabet& alphabet);

/// One symbol per consecutive pair of raw values. Two consecutive zeros give
/// '0'; otherwise d = 100 * (x[t] - x[t-1]) / (max - min) is classified:
///   U: d > big   u: small < d <= big   S: |d| <= small
///   d: -big <= d < -small   D: d < -big
/// A constant non-zero series is all 'S'. Same rules as
/// symbolize_diffs(normalize(raw), raw), but d is computed from the raw
/// difference so boundary cases stay exact for integer data.
std::string symbolize(std::span<const double> raw, const SymbolAlphabet& alphabet);

}  // namespace tsbib
