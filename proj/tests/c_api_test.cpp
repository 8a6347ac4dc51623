#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "tsbib/tsbib.h"

namespace fs = std::filesystem;

namespace {

nlohmann::json config_doc(const tsbib_config* config) {
  char* json = nullptr;
  EXPECT_EQ(tsbib_config_to_json(config, &json), TSBIB_OK);
  auto doc = nlohmann::json::parse(json);
  tsbib_string_free(json);
  return doc;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tsbib_capi_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ASSERT_EQ(tsbib_config_create(&config_), TSBIB_OK);
    ASSERT_EQ(tsbib_config_set(config_, "folds", "5"), TSBIB_OK);
  }
  void TearDown() override {
    tsbib_config_destroy(config_);
    fs::remove_all(dir_);
  }

  tsbib_dataset* load_synth(int n_per_class) {
    tsbib_synth_params p;
    tsbib_synth_params_init(&p);
    p.n_true = n_per_class;
    p.n_false = n_per_class;
    p.noise = 0.0;
    EXPECT_EQ(tsbib_synth_write(&p, dir_.c_str()), TSBIB_OK) << tsbib_last_error();
    tsbib_dataset* ds = nullptr;
    EXPECT_EQ(tsbib_dataset_load(config_, (dir_ / "observations.csv").c_str(), (dir_ / "labels.csv").c_str(), &ds),
              TSBIB_OK)
        << tsbib_last_error();
    return ds;
  }

  fs::path dir_;
  tsbib_config* config_ = nullptr;
};

}  // namespace

TEST_F(CApi, VersionIsSet) {
  EXPECT_STREQ(tsbib_version(), "1.0.0");
}

TEST_F(CApi, ConfigRoundTrip) {
  ASSERT_EQ(tsbib_config_set(config_, "top_k", "7"), TSBIB_OK);
  const auto doc = config_doc(config_);
  EXPECT_EQ(doc["top_k"], 7);
  EXPECT_EQ(doc["folds"], 5);
}

TEST_F(CApi, ConfigErrorsAreReported) {
  EXPECT_EQ(tsbib_config_set(config_, "no_such_key", "1"), TSBIB_ERR_CONFIG);
  EXPECT_NE(std::string(tsbib_last_error()).find("no_such_key"), std::string::npos);
  EXPECT_EQ(tsbib_config_set(config_, "folds", "x"), TSBIB_ERR_CONFIG);
  EXPECT_EQ(tsbib_config_set(nullptr, "folds", "3"), TSBIB_ERR_ARGUMENT);
  EXPECT_EQ(tsbib_config_create(nullptr), TSBIB_ERR_ARGUMENT);
  EXPECT_EQ(tsbib_config_load_file(config_, (dir_ / "missing.json").c_str()), TSBIB_ERR_CONFIG);
}

TEST_F(CApi, ConfigFileOverlay) {
  {
    std::ofstream out(dir_ / "c.json");
    out << R"({"top_k": 3})";
  }
  ASSERT_EQ(tsbib_config_load_file(config_, (dir_ / "c.json").c_str()), TSBIB_OK);
  EXPECT_EQ(config_doc(config_)["top_k"], 3);
}

TEST_F(CApi, DatasetSummary) {
  tsbib_dataset* ds = load_synth(6);
  ASSERT_NE(ds, nullptr);
  tsbib_dataset_summary s{};
  ASSERT_EQ(tsbib_dataset_summarize(ds, &s), TSBIB_OK);
  EXPECT_EQ(s.entities, 12u);
  EXPECT_EQ(s.true_entities, 6u);
  EXPECT_EQ(s.false_entities, 6u);
  EXPECT_EQ(s.observations, 12u * 10u * 5u);
  EXPECT_EQ(s.window_length, 10);
  tsbib_dataset_destroy(ds);
}

TEST_F(CApi, MissingInputIsDataError) {
  tsbib_dataset* ds = nullptr;
  EXPECT_EQ(tsbib_dataset_load(config_, "/nonexistent/o.csv", "/nonexistent/l.csv", &ds), TSBIB_ERR_DATA);
  EXPECT_EQ(ds, nullptr);
  EXPECT_NE(std::string(tsbib_last_error()).size(), 0u);
}

TEST_F(CApi, EvaluateWritesReports) {
  tsbib_dataset* ds = load_synth(10);
  ASSERT_EQ(tsbib_evaluate(ds, config_, (dir_ / "out").c_str()), TSBIB_OK) << tsbib_last_error();
  const auto report = slurp(dir_ / "out" / "report.json");
  EXPECT_NE(report.find("time_series_and_quantity"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "report.md"));
  ASSERT_EQ(tsbib_evaluate(ds, config_, (dir_ / "again").c_str()), TSBIB_OK);
  EXPECT_EQ(report, slurp(dir_ / "again" / "report.json"));
  tsbib_dataset_destroy(ds);
}

TEST_F(CApi, FeaturizeAndTree) {
  tsbib_dataset* ds = load_synth(8);
  ASSERT_EQ(tsbib_featurize(ds, config_, nullptr, (dir_ / "features.json").c_str()), TSBIB_OK) << tsbib_last_error();
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir_ / "features.json")).contains("feature_space"));
  {
    std::ofstream out(dir_ / "space.json");
    out << R"({"patterns": ["m2:Uu"]})";
  }
  ASSERT_EQ(tsbib_featurize(ds, config_, (dir_ / "space.json").c_str(), (dir_ / "fixed.json").c_str()), TSBIB_OK);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "fixed.json"))["columns"][0], "m2:Uu");
  {
    std::ofstream out(dir_ / "bad_space.json");
    out << R"({"patterns": ["zz"]})";
  }
  EXPECT_EQ(tsbib_featurize(ds, config_, (dir_ / "bad_space.json").c_str(), (dir_ / "x.json").c_str()),
            TSBIB_ERR_DATA);
  ASSERT_EQ(tsbib_export_tree(ds, config_, (dir_ / "tree.json").c_str()), TSBIB_OK);
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir_ / "tree.json")).contains("tree"));
  EXPECT_EQ(tsbib_export_tree(ds, config_, (dir_ / "features.json" / "tree.json").c_str()), TSBIB_ERR_IO);
  tsbib_dataset_destroy(ds);
}

TEST_F(CApi, InvalidConfigAtRunTime) {
  tsbib_dataset* ds = load_synth(3);
  ASSERT_EQ(tsbib_config_set(config_, "folds", "50"), TSBIB_OK);
  EXPECT_NE(tsbib_evaluate(ds, config_, (dir_ / "out").c_str()), TSBIB_OK);
  tsbib_dataset_destroy(ds);
}

TEST_F(CApi, SynthRejectsInfeasiblePlant) {
  tsbib_synth_params p;
  tsbib_synth_params_init(&p);
  p.shape = "UUUUUUUUU";
  EXPECT_EQ(tsbib_synth_write(&p, dir_.c_str()), TSBIB_ERR_CONFIG);
  p.shape = "Uu";
  p.metric = "citations";
  EXPECT_EQ(tsbib_synth_write(&p, dir_.c_str()), TSBIB_ERR_CONFIG);
}

TEST_F(CApi, Symbolize) {
  const double raw[] = {0, 10, 5, 0, 0};
  char out[8];
  ASSERT_EQ(tsbib_symbolize(raw, 5, 30, 5, out, sizeof out), TSBIB_OK);
  EXPECT_STREQ(out, "UDD0");
  EXPECT_EQ(tsbib_symbolize(raw, 5, 30, 5, out, 4), TSBIB_ERR_ARGUMENT);
  EXPECT_EQ(tsbib_symbolize(raw, 5, 5, 30, out, sizeof out), TSBIB_ERR_CONFIG);
}

TEST_F(CApi, ChiSquared) {
  double stat = 0, p = 0;
  ASSERT_EQ(tsbib_chi_squared_2x2(10, 20, 20, 10, 0, &stat, &p), TSBIB_OK);
  EXPECT_NEAR(stat, 20.0 / 3.0, 1e-12);
  EXPECT_NEAR(p, 0.009823, 1e-6);
  EXPECT_NE(tsbib_chi_squared_2x2(0, 0, 1, 1, 0, &stat, &p), TSBIB_OK);
  EXPECT_EQ(tsbib_chi_squared_2x2(1, 1, 1, 1, 0, nullptr, &p), TSBIB_ERR_ARGUMENT);
}
