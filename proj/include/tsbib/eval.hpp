#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsbib/ingest.hpp"

namespace tsbib {

/// 2x2 tally for a designated positive class.
struct ConfusionMatrix {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int tn = 0;

  int total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> labels, Label positive);

/// Percentages in [0, 100].
struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

/// Zero denominators yield 0.
PRF prf(const ConfusionMatrix& cm);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 1;
  double p_value = 1.0;
  bool yates = false;
};

struct CorrectIncorrect {
  int correct = 0;
  int incorrect = 0;
};

/// Upper tail of the chi-squared distribution: Q(dof/2, statistic/2).
double chi_squared_upper_tail(double statistic, int dof);

/// Pearson test of independence on the table [[a.correct, a.incorrect],
/// [b.correct, b.incorrect]]. Throws if any row or column total is zero.
ChiSquareResult chi_squared_2x2(CorrectIncorrect a, CorrectIncorrect b, bool yates = false);

/// Rounds half-up to one decimal and renders, e.g. 78.04999 -> "78.0".
std::string format_percent(double value);

struct ClassReport {
  Label label{};
  ConfusionMatrix cm;
  PRF scores;
};

struct RunReport {
  std::string name;
  std::vector<ClassReport> classes;  // TRUE then FALSE
  int correct = 0;
  int total = 0;
};

/// Builds a run from out-of-fold predictions, one ClassReport per class.
RunReport make_run(std::string name, std::span<const Label> predictions, std::span<const Label> labels);

struct SignificanceTest {
  std::string pair;  // "<run a> vs <run b>"
  ChiSquareResult result;
};

struct Report {
  std::vector<RunReport> runs;
  std::vector<SignificanceTest> tests;
  nlohmann::ordered_json config;  // effective configuration, echoed verbatim
};

nlohmann::ordered_json report_json(const Report& report);
std::string report_markdown(const Report& report);

}  // namespace tsbib
