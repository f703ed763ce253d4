#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "psc/bench_io.hpp"
#include "psc/bench_runner.hpp"

namespace psc {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("psc_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BenchConfig tiny_config() {
  BenchConfig cfg;
  cfg.train_count = 300;
  cfg.test_count = 100;
  cfg.square_test_count = 50;
  cfg.train.epochs = 4;
  return cfg;
}

TEST(FormatDecimal, KeepsADecimalPoint) {
  EXPECT_EQ(format_decimal(1.0), "1.0");
  EXPECT_EQ(format_decimal(-0.5), "-0.5");
  EXPECT_EQ(format_decimal(-0.49999999999999978), "-0.5");
  EXPECT_EQ(format_decimal(0.123456789012345), "0.123456789012");
}

TEST(DatasetCsv, RoundTripIsExact) {
  const auto dir = scratch_dir("dataset");
  const auto data = generate_dataset({250, 0.4, 0.03, 9});
  write_dataset_csv(data, dir / "data.csv");
  EXPECT_EQ(read_dataset_csv(dir / "data.csv"), data);
  const std::string text = slurp(dir / "data.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "schema_version,1");
}

TEST(DatasetCsv, RejectsMissingSchemaRow) {
  const auto dir = scratch_dir("bad_dataset");
  std::ofstream(dir / "bad.csv") << "index,cx\n0,1\n";
  EXPECT_THROW(read_dataset_csv(dir / "bad.csv"), std::runtime_error);
}

TEST(ModelFile, RoundTrip) {
  const auto dir = scratch_dir("model");
  const Regressor model(8, {6}, Head::psc, 5, 3);
  save_model(model, dir / "m.txt");
  EXPECT_EQ(load_model(dir / "m.txt"), model);
}

TEST(CoderRoundTrip, ExactForEveryStepCount) {
  for (int n : {3, 4, 5, 8}) {
    EXPECT_LE(coder_round_trip_error(Head::psc, n), 1e-9);
    EXPECT_LE(coder_round_trip_error(Head::pscd, n), 1e-9);
  }
  EXPECT_EQ(coder_round_trip_error(Head::naive, 3), 0.0);
}

TEST(BenchRunner, WritesEveryFileWithSchemaRow) {
  const auto dir = scratch_dir("bench");
  const auto result = run_bench(tiny_config());
  ASSERT_EQ(result.runs.size(), 3u);
  write_bench_outputs(result, dir);
  for (const char* name : {"report.csv", "errors.csv", "losscurve.csv"}) {
    const std::string text = slurp(dir / name);
    ASSERT_FALSE(text.empty()) << name;
    EXPECT_EQ(text.substr(0, text.find('\n')), "schema_version,1") << name;
  }
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(report["schema_version"], 1);
  EXPECT_EQ(report["rows"].size(), 6u);  // three heads x {main, square}
  const auto config = nlohmann::json::parse(slurp(dir / "config.json"));
  EXPECT_EQ(config["seed"], 42);
  EXPECT_EQ(config["train"]["epochs"], 4);

  std::istringstream csv(slurp(dir / "report.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 2 + 6);
}

TEST(BenchRunner, RepeatedRunsAreByteIdentical) {
  const auto a = scratch_dir("det_a");
  const auto b = scratch_dir("det_b");
  write_bench_outputs(run_bench(tiny_config()), a);
  write_bench_outputs(run_bench(tiny_config()), b);
  for (const char* name : {"report.csv", "report.json", "errors.csv", "losscurve.csv", "config.json"}) {
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
}

TEST(BenchRunner, SweepTrainsNaiveOnce) {
  BenchConfig cfg = tiny_config();
  cfg.square_test_count = 0;
  cfg.sweep_n_steps = {3, 4, 5};
  const auto result = run_bench(cfg);
  ASSERT_EQ(result.runs.size(), 7u);
  int naive = 0;
  for (const HeadRun& run : result.runs) {
    if (run.head == Head::naive) {
      ++naive;
      EXPECT_EQ(run.n_step, 0);
      continue;
    }
    ASSERT_TRUE(run.coder_round_trip.has_value());
    EXPECT_LE(*run.coder_round_trip, 1e-9);
    EXPECT_EQ(run.model->n_step(), run.n_step);
  }
  EXPECT_EQ(naive, 1);
}

TEST(BenchRunner, DivergenceIsReportedNotThrown) {
  BenchConfig cfg = tiny_config();
  cfg.heads = {Head::naive};
  cfg.train.learning_rate = 1e200;
  cfg.train.epochs = 30;
  const auto result = run_bench(cfg);
  ASSERT_EQ(result.runs.size(), 1u);
  EXPECT_TRUE(result.runs[0].diverged);
  const auto dir = scratch_dir("diverged");
  write_bench_outputs(result, dir);
  EXPECT_NE(slurp(dir / "report.csv").find("diverged"), std::string::npos);
}

TEST(BenchRunner, ReadsDatasetFiles) {
  const auto dir = scratch_dir("files");
  write_dataset_csv(generate_dataset({200, 0.0, 0.0, 1}), dir / "train.csv");
  write_dataset_csv(generate_dataset({50, 0.0, 0.0, 2}), dir / "test.csv");
  BenchConfig cfg = tiny_config();
  cfg.heads = {Head::psc};
  cfg.square_test_count = 0;
  cfg.train_path = (dir / "train.csv").string();
  cfg.test_path = (dir / "test.csv").string();
  const auto result = run_bench(cfg);
  EXPECT_EQ(result.runs[0].main->overall.count, 50u);
}

}  // namespace
}  // namespace psc
