#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psc/evaluation.hpp"
#include "psc/trainer.hpp"

#include <json.hpp>

namespace psc {

struct BenchConfig {
  std::vector<Head> heads{Head::naive, Head::psc, Head::pscd};
  int train_count = 5000;
  int test_count = 1000;
  /// Size of an extra square-only test set; 0 disables it.
  int square_test_count = 0;
  /// Fraction of squares in the training set (the main test set matches it).
  double square_fraction = 0.0;
  double noise_sigma = 0.01;
  std::uint64_t seed = 42;
  TrainConfig train;
  /// Step counts to sweep; empty means just train.n_step.
  std::vector<int> sweep_n_steps;
  /// Optional dataset files replacing the generated train/test sets.
  std::string train_path;
  std::string test_path;
};

/// One trained head at one step count.
struct HeadRun {
  Head head = Head::psc;
  int n_step = 0;  // 0 for the naive head
  bool diverged = false;
  std::string message;
  std::vector<EpochStats> curve;
  std::optional<Regressor> model;
  std::optional<EvalReport> main;
  std::optional<EvalReport> square;
  /// Worst coder round-trip error over a 10,000-point grid (coded heads only).
  std::optional<double> coder_round_trip;
};

struct BenchResult {
  BenchConfig config;
  std::vector<HeadRun> runs;
};

/// Max angle error of decode(encode(.)) for the head's coder over a uniform grid.
double coder_round_trip_error(Head head, int n_step, int grid_points = 10000);

/// Trains and evaluates every (head, n_step) pair. Training divergence is
/// recorded in the run instead of thrown. Progress goes to `log` if given.
BenchResult run_bench(const BenchConfig& config, std::ostream* log = nullptr);

nlohmann::json config_to_json(const BenchConfig& config);

/// Writes report.csv, report.json, errors.csv, losscurve.csv and config.json.
void write_bench_outputs(const BenchResult& result, const std::filesystem::path& dir);

/// Writes report.csv/report.json/errors.csv for a single evaluation.
void write_eval_outputs(const HeadRun& run, const std::filesystem::path& dir);

}  // namespace psc
