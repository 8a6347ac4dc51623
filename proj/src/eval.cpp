#include "tsbib/eval.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tsbib/errors.hpp"

namespace tsbib {

ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> labels, Label positive) {
  if (predictions.size() != labels.size()) throw Error("confusion: predictions and labels differ in length");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = predictions[i] == positive;
    const bool actual = labels[i] == positive;
    if (predicted && actual) ++cm.tp;
    else if (predicted) ++cm.fp;
    else if (actual) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

PRF prf(const ConfusionMatrix& cm) {
  PRF out;
  if (cm.tp + cm.fp > 0) out.precision = 100.0 * cm.tp / (cm.tp + cm.fp);
  if (cm.tp + cm.fn > 0) out.recall = 100.0 * cm.tp / (cm.tp + cm.fn);
  if (out.precision + out.recall > 0.0) {
    out.f_measure = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

double chi_squared_upper_tail(double statistic, int dof) {
  if (dof < 1) throw Error("chi_squared_upper_tail: dof must be >= 1");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquareResult chi_squared_2x2(CorrectIncorrect a, CorrectIncorrect b, bool yates) {
  const std::array<std::array<double, 2>, 2> observed{{{double(a.correct), double(a.incorrect)},
                                                       {double(b.correct), double(b.incorrect)}}};
  for (const auto& row : observed) {
    for (double v : row) {
      if (v < 0.0) throw Error("chi_squared_2x2: negative count");
    }
  }
  const std::array<double, 2> row_total{observed[0][0] + observed[0][1], observed[1][0] + observed[1][1]};
  const std::array<double, 2> col_total{observed[0][0] + observed[1][0], observed[0][1] + observed[1][1]};
  const double n = row_total[0] + row_total[1];
  for (double t : {row_total[0], row_total[1], col_total[0], col_total[1]}) {
    if (t <= 0.0) throw Error("chi_squared_2x2: a marginal total is zero (expected count 0)");
  }

  ChiSquareResult result;
  result.yates = yates;
  result.dof = 1;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      const double expected = row_total[r] * col_total[c] / n;
      double dev = std::abs(observed[r][c] - expected);
      if (yates) dev = std::max(0.0, dev - 0.5);
      result.statistic += dev * dev / expected;
    }
  }
  result.p_value = chi_squared_upper_tail(result.statistic, result.dof);
  return result;
}

std::string format_percent(double value) {
  // The small bias absorbs representation error such as 78.05 -> 78.04999...
  const double rounded = std::floor(value * 10.0 + 0.5 + 1e-9) / 10.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", rounded);
  return buf;
}

RunReport make_run(std::string name, std::span<const Label> predictions, std::span<const Label> labels) {
  RunReport run;
  run.name = std::move(name);
  for (Label cls : {Label::True, Label::False}) {
    const auto cm = confusion(predictions, labels, cls);
    run.classes.push_back(ClassReport{cls, cm, prf(cm)});
  }
  run.total = static_cast<int>(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) run.correct += predictions[i] == labels[i] ? 1 : 0;
  return run;
}

nlohmann::ordered_json report_json(const Report& report) {
  nlohmann::ordered_json doc;
  doc["runs"] = nlohmann::ordered_json::array();
  for (const auto& run : report.runs) {
    for (const auto& cls : run.classes) {
      nlohmann::ordered_json row;
      row["name"] = run.name;
      row["class"] = label_name(cls.label);
      row["precision"] = cls.scores.precision;
      row["recall"] = cls.scores.recall;
      row["f"] = cls.scores.f_measure;
      row["tp"] = cls.cm.tp;
      row["fp"] = cls.cm.fp;
      row["fn"] = cls.cm.fn;
      row["tn"] = cls.cm.tn;
      doc["runs"].push_back(std::move(row));
    }
  }
  doc["tests"] = nlohmann::ordered_json::array();
  for (const auto& t : report.tests) {
    nlohmann::ordered_json row;
    row["pair"] = t.pair;
    row["statistic"] = t.result.statistic;
    row["dof"] = t.result.dof;
    row["p_value"] = t.result.p_value;
    row["yates"] = t.result.yates;
    doc["tests"].push_back(std::move(row));
  }
  if (!report.config.is_null()) doc["config"] = report.config;
  return doc;
}

std::string report_markdown(const Report& report) {
  std::ostringstream out;
  out << "# Classification accuracy (%)\n\n";
  out << "| Run | Class | Precision | Recall | F-measure |\n";
  out << "|-----|-------|-----------|--------|-----------|\n";
  for (const auto& run : report.runs) {
    for (const auto& cls : run.classes) {
      out << "| " << run.name << " | " << label_name(cls.label) << " | " << format_percent(cls.scores.precision)
          << " | " << format_percent(cls.scores.recall) << " | " << format_percent(cls.scores.f_measure) << " |\n";
    }
  }
  out << "\n";
  for (const auto& run : report.runs) {
    out << "- " << run.name << ": " << run.correct << " of " << run.total << " correctly classified\n";
  }
  if (!report.tests.empty()) {
    out << "\n## Significance (chi-squared test for independence)\n\n";
    out << "| Pair | Statistic | dof | p | Yates |\n";
    out << "|------|-----------|-----|---|-------|\n";
    for (const auto& t : report.tests) {
      char stat[32], p[32];
      std::snprintf(stat, sizeof stat, "%.4f", t.result.statistic);
      std::snprintf(p, sizeof p, "%.4g", t.result.p_value);
      out << "| " << t.pair << " | " << stat << " | " << t.result.dof << " | " << p << " | "
          << (t.result.yates ? "yes" : "no") << " |\n";
    }
  }
  return out.str();
}

}  // namespace tsbib
