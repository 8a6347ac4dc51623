#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "tsbib/errors.hpp"
#include "tsbib/random.hpp"
#include "tsbib/select.hpp"

using namespace tsbib;

namespace {

PatternCounts entity(std::string id, std::map<std::string, int> counts) {
  PatternCounts pc;
  pc.entity_id = std::move(id);
  for (auto& [k, v] : counts) pc.counts.emplace(k, v);
  return pc;
}

const PatternScore& find(const std::vector<PatternScore>& scores, std::string_view id, std::string_view key) {
  for (const auto& s : scores) {
    if (s.entity_id == id && s.pattern == key) return s;
  }
  throw std::runtime_error("score not found");
}

CohortEntity cohort_entity(int window) {
  CohortEntity e;
  e.entity_id = "e";
  for (auto& s : e.series) s.assign(static_cast<std::size_t>(window), 0.0);
  return e;
}

}  // namespace

TEST(ScorePatterns, DirectEvaluation) {
  std::vector<PatternCounts> all;
  all.push_back(entity("a", {{"m1:U", 3}}));
  all.push_back(entity("b", {{"m1:U", 1}}));
  for (int i = 0; i < 6; ++i) all.push_back(entity("z" + std::to_string(i), {{"m1:S", 1}}));
  const auto scores = score_patterns(all);
  const auto& s = find(scores, "a", "m1:U");
  EXPECT_EQ(s.paf, 3);
  EXPECT_EQ(s.pef, 2);
  EXPECT_EQ(s.n_total, 8);
  EXPECT_NEAR(s.score, 4.15888, 1e-5);
  EXPECT_DOUBLE_EQ(s.score, 3 * std::log(4.0));
}

TEST(ScorePatterns, UbiquitousPatternScoresExactlyZero) {
  std::vector<PatternCounts> all = {entity("a", {{"m1:S", 4}, {"m1:U", 1}}), entity("b", {{"m1:S", 2}})};
  const auto scores = score_patterns(all);
  EXPECT_EQ(find(scores, "a", "m1:S").score, 0.0);
  EXPECT_EQ(find(scores, "b", "m1:S").score, 0.0);
  EXPECT_GT(find(scores, "a", "m1:U").score, 0.0);
}

TEST(ScorePatterns, SingleEntityScoresZero) {
  std::vector<PatternCounts> all = {entity("a", {{"m1:U", 1}})};
  EXPECT_EQ(score_patterns(all).front().score, 0.0);
}

TEST(ScorePatterns, OutputFollowsEntityThenKeyOrder) {
  std::vector<PatternCounts> all = {entity("b", {{"m2:S", 1}, {"m1:U", 1}}), entity("a", {{"m1:d", 1}})};
  const auto scores = score_patterns(all);
  ASSERT_EQ(scores.size(), 3u);
  EXPECT_EQ(scores[0].entity_id, "b");
  EXPECT_EQ(scores[0].pattern, "m1:U");
  EXPECT_EQ(scores[1].pattern, "m2:S");
  EXPECT_EQ(scores[2].entity_id, "a");
}

TEST(SelectTopK, FewerCandidatesThanK) {
  std::vector<PatternCounts> all = {entity("a", {{"m1:U", 1}, {"m1:u", 2}, {"m1:S", 3}}), entity("b", {})};
  const auto space = select_top_k(score_patterns(all), 10);
  EXPECT_EQ(space.patterns, (std::vector<std::string>{"m1:S", "m1:U", "m1:u"}));
}

TEST(SelectTopK, SharedTopPatternIsCountedOnce) {
  // a and b share their best pattern; each has 12 private runners-up.
  std::map<std::string, int> a = {{"m1:UUUU", 50}}, b = {{"m1:UUUU", 50}};
  const std::string symbols = "uSdD0";
  for (std::size_t i = 0; i < 12; ++i) {
    const std::string run(i / 5 + 1, symbols[i % 5]);
    a["m2:" + run] = 2;
    b["m3:" + run] = 2;
  }
  std::vector<PatternCounts> all = {entity("a", a), entity("b", b), entity("c", {{"m5:S", 1}})};
  auto patterns = select_top_k(score_patterns(all), 10).patterns;
  std::erase(patterns, "m5:S");
  EXPECT_EQ(std::count(patterns.begin(), patterns.end(), "m1:UUUU"), 1);
  EXPECT_EQ(patterns.size(), 19u);
}

TEST(SelectTopK, TiesBreakByKey) {
  std::vector<PatternCounts> all = {entity("a", {{"m1:d", 1}, {"m1:U", 1}, {"m1:D", 1}}), entity("b", {})};
  EXPECT_EQ(select_top_k(score_patterns(all), 2).patterns, (std::vector<std::string>{"m1:D", "m1:U"}));
}

TEST(SelectTopK, NumericallyEqualScoresAreTies) {
  // 2*ln(4) and 4*ln(2) agree exactly only in real arithmetic.
  std::vector<PatternScore> scores = {{"a", "m1:b", 4, 4, 8, 4 * std::log(2.0)},
                                      {"a", "m1:a", 2, 2, 8, 2 * std::log(4.0)}};
  EXPECT_EQ(select_top_k(scores, 1).patterns, (std::vector<std::string>{"m1:a"}));
  std::swap(scores[0].score, scores[1].score);
  EXPECT_EQ(select_top_k(scores, 1).patterns, (std::vector<std::string>{"m1:a"}));
}

TEST(SelectTopK, IndependentOfLogBase) {
  Rng rng(17);
  std::vector<PatternCounts> all;
  for (int e = 0; e < 30; ++e) {
    std::map<std::string, int> counts;
    for (int p = 0; p < 40; ++p) {
      if (uniform_unit(rng) < 0.3) counts["m1:" + std::string(static_cast<std::size_t>(p % 4 + 1), "UuSdD0"[p % 6])] =
          static_cast<int>(uniform_int(rng, 1, 5));
    }
    all.push_back(entity("e" + std::to_string(e), counts));
  }
  const auto natural = score_patterns(all);
  auto base2 = natural;
  for (auto& s : base2) s.score = s.paf * std::log2(static_cast<double>(s.n_total) / s.pef);
  EXPECT_EQ(select_top_k(natural, 3), select_top_k(base2, 3));
}

TEST(SelectTopK, FiftyEntitiesNeverExceedFiveHundred) {
  Rng rng(23);
  std::vector<PatternCounts> all;
  for (int e = 0; e < 50; ++e) {
    std::map<std::string, int> counts;
    for (int p = 0; p < 60; ++p) counts["m2:U+m3:" + std::to_string(uniform_below(rng, 100000))] = 1;
    all.push_back(entity("e" + std::to_string(e), counts));
  }
  EXPECT_LE(select_top_k(score_patterns(all), 10).patterns.size(), 500u);
}

TEST(SelectTopK, RejectsNonPositiveK) {
  EXPECT_THROW(select_top_k({}, 0), ConfigError);
}

TEST(QuantityFeatures, SumsCountsAndAveragesRatio) {
  auto e = cohort_entity(10);
  for (int t = 0; t < 10; ++t) e.series[metric_index(MetricId::InternationalPapers)][static_cast<std::size_t>(t)] = t + 1;
  e.series[metric_index(MetricId::FirstAuthorRatio)].assign(10, 40.0);
  EXPECT_EQ(quantity_features(e), (QuantityVector{0, 55, 0, 0, 40}));
  EXPECT_EQ(quantity_features(cohort_entity(10)), (QuantityVector{0, 0, 0, 0, 0}));
  auto two = cohort_entity(2);
  two.series[metric_index(MetricId::FirstAuthorRatio)] = {100, 0};
  EXPECT_EQ(quantity_features(two)[4], 50.0);
}

TEST(BuildMatrix, LayoutAndModes) {
  std::vector<EntityFeatures> entities(2);
  entities[0] = {"a", Label::True, {1, 2, 3, 4, 5}, entity("a", {{"m1:U", 3}})};
  entities[1] = {"b", Label::False, {6, 7, 8, 9, 10}, entity("b", {{"m1:S", 1}})};
  const FeatureSpace space{{"m1:S", "m1:U"}};

  const auto counts = build_matrix(entities, space, FeatureMode::Counts, true);
  EXPECT_EQ(counts.column_names, space.column_names());
  EXPECT_EQ(counts.rows[0], (std::vector<double>{0, 3, 1, 2, 3, 4, 5}));
  EXPECT_EQ(counts.rows[1], (std::vector<double>{1, 0, 6, 7, 8, 9, 10}));
  EXPECT_EQ(counts.labels, (std::vector<Label>{Label::True, Label::False}));
  EXPECT_EQ(counts.entity_ids, (std::vector<std::string>{"a", "b"}));

  EXPECT_EQ(build_matrix(entities, space, FeatureMode::Binary, true).rows[0][1], 1.0);

  const auto baseline = build_matrix(entities, space, FeatureMode::Counts, false);
  EXPECT_EQ(baseline.width(), 5u);
  EXPECT_EQ(baseline.rows[1], (std::vector<double>{6, 7, 8, 9, 10}));
}

TEST(FeatureSpace, JsonRoundTrip) {
  const FeatureSpace space{{"m1:S", "m1:U+m2:d"}};
  EXPECT_EQ(feature_space_from_json(to_json(space)), space);
  EXPECT_THROW(feature_space_from_json(nlohmann::json{{"patterns", {"bogus"}}}), DataError);
  EXPECT_THROW(feature_space_from_json(nlohmann::json::array()), DataError);
}

TEST(SelectFeatures, UsesOnlyGivenEntities) {
  std::vector<EntityFeatures> entities(3);
  entities[0] = {"a", Label::True, {}, entity("a", {{"m1:U", 1}})};
  entities[1] = {"b", Label::False, {}, entity("b", {{"m1:S", 1}})};
  entities[2] = {"c", Label::False, {}, entity("c", {{"m1:D", 1}})};
  const std::vector<const EntityFeatures*> subset = {&entities[0], &entities[1]};
  EXPECT_EQ(select_features(std::span<const EntityFeatures* const>(subset), 10).patterns,
            (std::vector<std::string>{"m1:S", "m1:U"}));
}
