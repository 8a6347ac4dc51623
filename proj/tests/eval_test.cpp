#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tsbib/errors.hpp"
#include "tsbib/eval.hpp"

using namespace tsbib;

namespace {

constexpr Label T = Label::True;
constexpr Label F = Label::False;

ConfusionMatrix cm(int tp, int fp, int fn, int tn = 0) { return ConfusionMatrix{tp, fp, fn, tn}; }

Report two_run_report() {
  const std::vector<Label> labels = {T, T, T, F, F, F};
  Report r;
  r.runs.push_back(make_run("quantity", std::vector<Label>{T, F, F, F, T, F}, labels));
  r.runs.push_back(make_run("time_series_and_quantity", std::vector<Label>{T, T, T, F, F, T}, labels));
  r.config = {{"seed", 42}};
  return r;
}

}  // namespace

TEST(Confusion, HandTally) {
  const std::vector<Label> labels = {T, T, T, T, F, F, F, F, F, T};
  const std::vector<Label> preds = {T, F, T, T, T, F, F, T, F, F};
  EXPECT_EQ(confusion(preds, labels, T), cm(3, 2, 2, 3));
  EXPECT_EQ(confusion(preds, labels, F), cm(3, 2, 2, 3));
}

TEST(Confusion, AllCorrectAndAllWrong) {
  const std::vector<Label> labels = {T, F, F};
  EXPECT_EQ(confusion(labels, labels, T), cm(1, 0, 0, 2));
  const std::vector<Label> flipped = {F, T, T};
  const auto wrong = confusion(flipped, labels, T);
  EXPECT_EQ(wrong.tp, 0);
  EXPECT_EQ(wrong.tn, 0);
  EXPECT_THROW(confusion(flipped, std::vector<Label>{T}, T), Error);
}

TEST(Prf, ReconstructedTableRows) {
  const auto q = prf(cm(16, 4, 5));
  EXPECT_NEAR(q.precision, 80.0, 0.05);
  EXPECT_NEAR(q.recall, 76.2, 0.05);
  EXPECT_NEAR(q.f_measure, 78.0, 0.05);
  EXPECT_EQ(format_percent(q.precision), "80.0");
  EXPECT_EQ(format_percent(q.recall), "76.2");
  EXPECT_EQ(format_percent(q.f_measure), "78.0");

  const auto c = prf(cm(19, 1, 2));
  EXPECT_EQ(format_percent(c.precision), "95.0");
  EXPECT_EQ(format_percent(c.recall), "90.5");
  EXPECT_EQ(format_percent(c.f_measure), "92.7");
}

TEST(Prf, ZeroDenominators) {
  const auto z = prf(cm(0, 0, 0, 5));
  EXPECT_EQ(z.precision, 0.0);
  EXPECT_EQ(z.recall, 0.0);
  EXPECT_EQ(z.f_measure, 0.0);
}

TEST(FormatPercent, RoundsHalfUp) {
  EXPECT_EQ(format_percent(78.04999), "78.0");
  EXPECT_EQ(format_percent(78.05), "78.1");
  EXPECT_EQ(format_percent(0.0), "0.0");
  EXPECT_EQ(format_percent(100.0), "100.0");
}

TEST(ChiSquared, HandComputedTables) {
  const auto a = chi_squared_2x2({10, 20}, {20, 10});
  EXPECT_NEAR(a.statistic, 20.0 / 3.0, 1e-12);
  EXPECT_NEAR(a.p_value, 0.009823, 1e-6);
  EXPECT_EQ(a.dof, 1);
  EXPECT_FALSE(a.yates);

  const auto b = chi_squared_2x2({25, 5}, {15, 15});
  EXPECT_NEAR(b.statistic, 7.5, 1e-12);
  EXPECT_NEAR(b.p_value, 0.00617, 1e-5);
}

TEST(ChiSquared, IdenticalRows) {
  const auto r = chi_squared_2x2({12, 8}, {12, 8});
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(ChiSquared, YatesCorrection) {
  const auto r = chi_squared_2x2({10, 20}, {20, 10}, true);
  // (|ad - bc| - n/2)^2 n / (row and column products)
  EXPECT_NEAR(r.statistic, std::pow(300.0 - 30.0, 2) * 60.0 / (30.0 * 30.0 * 30.0 * 30.0), 1e-12);
  EXPECT_TRUE(r.yates);
  EXPECT_LT(r.statistic, chi_squared_2x2({10, 20}, {20, 10}).statistic);
}

TEST(ChiSquared, RejectsZeroMarginal) {
  EXPECT_THROW(chi_squared_2x2({0, 0}, {3, 4}), Error);
  EXPECT_THROW(chi_squared_2x2({5, 0}, {3, 0}), Error);
}

TEST(ChiSquared, UpperTailMatchesNormalIdentity) {
  // With one degree of freedom P(X > x) = erfc(sqrt(x / 2)).
  for (int i = 0; i <= 300; ++i) {
    const double x = i * 0.1;
    ASSERT_NEAR(chi_squared_upper_tail(x, 1), std::erfc(std::sqrt(x / 2.0)), 1e-9) << x;
  }
  EXPECT_NEAR(chi_squared_upper_tail(2.0, 2), std::exp(-1.0), 1e-12);
}

TEST(Report, JsonLayout) {
  auto report = two_run_report();
  const auto doc = report_json(report);
  // One row per run and class.
  ASSERT_EQ(doc["runs"].size(), 4u);
  EXPECT_EQ(doc["runs"][0]["name"], "quantity");
  EXPECT_EQ(doc["runs"][0]["class"], "TRUE");
  EXPECT_EQ(doc["runs"][1]["class"], "FALSE");
  EXPECT_EQ(doc["runs"][2]["name"], "time_series_and_quantity");
  // quantity predicts TRUE for rows 0 and 4: one hit, one false alarm, two misses.
  EXPECT_EQ(doc["runs"][0]["tp"], 1);
  EXPECT_EQ(doc["runs"][0]["fp"], 1);
  EXPECT_EQ(doc["runs"][0]["fn"], 2);
  EXPECT_NEAR(doc["runs"][0]["precision"].get<double>(), 50.0, 1e-12);
  for (const char* key : {"name", "class", "precision", "recall", "f"}) EXPECT_TRUE(doc["runs"][3].contains(key)) << key;
  EXPECT_EQ(doc["config"]["seed"], 42);
  EXPECT_TRUE(doc["tests"].empty());
}

TEST(Report, MarkdownTableAndOptionalSignificance) {
  auto report = two_run_report();
  const auto md = report_markdown(report);
  EXPECT_EQ(std::count(md.begin(), md.end(), '\n') > 0, true);
  std::size_t rows = 0;
  for (std::size_t pos = md.find("| quantity |"); pos != std::string::npos; pos = md.find("| quantity |", pos + 1)) ++rows;
  for (std::size_t pos = md.find("| time_series_and_quantity |"); pos != std::string::npos;
       pos = md.find("| time_series_and_quantity |", pos + 1)) {
    ++rows;
  }
  EXPECT_EQ(rows, 4u);
  EXPECT_EQ(md.find("Significance"), std::string::npos);

  report.tests.push_back({"quantity vs time_series_and_quantity", chi_squared_2x2({4, 2}, {5, 1})});
  EXPECT_NE(report_markdown(report).find("Significance"), std::string::npos);
  EXPECT_EQ(report_json(report)["tests"].size(), 1u);
}

TEST(MakeRun, CountsAndClasses) {
  const auto run = make_run("x", std::vector<Label>{T, F, T}, std::vector<Label>{T, F, F});
  EXPECT_EQ(run.correct, 2);
  EXPECT_EQ(run.total, 3);
  ASSERT_EQ(run.classes.size(), 2u);
  EXPECT_EQ(run.classes[0].label, T);
  EXPECT_EQ(run.classes[0].cm, cm(1, 1, 0, 1));
  EXPECT_EQ(run.classes[1].cm, cm(1, 0, 1, 1));
}
