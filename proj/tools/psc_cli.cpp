// psc: command-line front end for the phase-shifting angle coder.
//
//   psc encode --theta 0.6 [--n-step 3] [--dual]
//   psc decode [--dual] -- -0.5 -0.5 1.0
//   psc verify
//   psc bench [--heads naive,psc,pscd] [--seed 42] [--sweep-nstep 3,4,5] [--out DIR]
//   psc generate --count 1000 --out data.csv
//   psc eval --model model.txt --data data.csv --out DIR

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psc/bench_io.hpp"
#include "psc/bench_runner.hpp"
#include "psc/coder.hpp"
#include "psc/dual_coder.hpp"
#include "psc/verify.hpp"

namespace {

using namespace psc;

constexpr const char* kOutputDirEnv = "PSC_OUTPUT_DIR";

std::filesystem::path resolve_output_dir(const std::string& flag, const char* fallback) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return fallback;
}

std::string fixed(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

void print_values(std::span<const double> values) {
  std::string line;
  for (double v : values) {
    if (!line.empty()) line += ' ';
    line += format_decimal(v);
  }
  std::cout << line << '\n';
}

int cmd_encode(double theta, int n_step, bool dual) {
  if (dual) {
    print_values(encode_dual(Angle(theta), n_step).flatten());
  } else {
    const auto code = encode(angle_to_phase(Angle(theta), SymmetryConfig::rectangle()), n_step);
    print_values(code.values());
  }
  return 0;
}

int cmd_decode(const std::vector<double>& values, bool dual) {
  if (dual) {
    if (values.size() < 6 || values.size() % 2 != 0) {
      throw std::invalid_argument("--dual needs an even number (>= 6) of values");
    }
    const auto result = decode_dual(DualPhaseCode::from_flat(values));
    const double theta = phase_to_angle(result.phi).radians;
    std::cout << "theta_rad=" << fixed(theta) << " theta_deg=" << fixed(to_degrees(theta))
              << " delta=" << fixed(result.delta) << " branch=" << to_string(result.branch)
              << '\n';
  } else {
    if (values.size() < static_cast<std::size_t>(kMinSteps)) {
      throw std::invalid_argument("decode needs at least 3 values");
    }
    const double theta = phase_to_angle(decode(values)).radians;
    std::cout << "theta_rad=" << fixed(theta) << " theta_deg=" << fixed(to_degrees(theta))
              << '\n';
  }
  return 0;
}

int cmd_verify(int grid) {
  VerifyOptions options;
  options.grid_points = grid;
  const auto results = run_verification(options);
  int failures = 0;
  for (const auto& r : results) {
    std::printf("%s  %-34s %s  [%.2fs]\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                r.seconds);
    if (!r.passed) ++failures;
  }
  std::printf("%zu properties, %d failed\n", results.size(), failures);
  if (failures > 0) {
    for (const auto& r : results) {
      if (!r.passed) std::fprintf(stderr, "property failed: %s\n", r.name.c_str());
    }
    return 1;
  }
  return 0;
}

std::vector<Head> parse_heads(const std::vector<std::string>& names) {
  std::vector<Head> heads;
  for (const auto& n : names) heads.push_back(parse_head(n));
  return heads;
}

int cmd_bench(BenchConfig config, const std::filesystem::path& out, bool save_models) {
  const BenchResult result = run_bench(config, &std::cerr);
  write_bench_outputs(result, out);
  bool diverged = false;
  for (const HeadRun& run : result.runs) {
    if (save_models && run.model) {
      save_model(*run.model, out / ("model_" + std::string(to_string(run.head)) + "_n" +
                                    std::to_string(run.n_step) + ".txt"));
    }
    if (run.diverged) {
      diverged = true;
      continue;
    }
    std::printf("%-5s n_step=%d  median=%.4f deg  boundary_median=%.4f deg", std::string(to_string(run.head)).c_str(),
                run.n_step, to_degrees(run.main->overall.median), to_degrees(run.main->boundary.median));
    if (run.square) std::printf("  square_median=%.4f deg", to_degrees(run.square->overall.median));
    std::printf("\n");
  }
  std::printf("results written to %s\n", out.string().c_str());
  return diverged ? 2 : 0;
}

int cmd_generate(const DatasetConfig& config, const std::filesystem::path& out) {
  write_dataset_csv(generate_dataset(config), out);
  std::printf("%d samples written to %s\n", config.count, out.string().c_str());
  return 0;
}

int cmd_eval(const std::filesystem::path& model_path, const std::filesystem::path& data_path,
             const std::filesystem::path& out) {
  HeadRun run;
  run.model = load_model(model_path);
  run.head = run.model->head();
  run.n_step = run.head == Head::naive ? 0 : run.model->n_step();
  run.main = evaluate(*run.model, read_dataset_csv(data_path));
  write_eval_outputs(run, out);
  std::printf("%s median=%.4f deg mean=%.4f deg indeterminate=%zu\n", std::string(to_string(run.head)).c_str(),
              to_degrees(run.main->overall.median), to_degrees(run.main->overall.mean), run.main->indeterminate);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-shifting angle coder: encode, decode, verify and benchmark"};
  app.set_config("--config", "", "Read options from a TOML/INI file (sections per subcommand)");
  app.require_subcommand(1);

  double theta = 0.0;
  int n_step = kDefaultSteps;
  bool dual = false;
  auto* encode_cmd = app.add_subcommand("encode", "Encode an angle (radians, [-pi/2, pi/2))");
  encode_cmd->add_option("--theta", theta, "Orientation angle in radians")->required();
  encode_cmd->add_option("--n-step", n_step, "Phase-shifting steps (>= 3)")->capture_default_str();
  encode_cmd->add_flag("--dual", dual, "Dual-frequency code (2*N values)");

  std::vector<double> values;
  bool decode_dual_flag = false;
  auto* decode_cmd = app.add_subcommand("decode", "Decode a code back to an angle");
  decode_cmd->add_option("values", values, "Code values")->required();
  decode_cmd->add_flag("--dual", decode_dual_flag, "Values are a dual-frequency code {X1, X2}");

  int verify_grid = 10000;
  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite; exit 0 iff all pass");
  verify_cmd->add_option("--grid", verify_grid, "Grid points for round-trip sweeps")->capture_default_str();

  BenchConfig bench;
  std::vector<std::string> head_names{"naive", "psc", "pscd"};
  std::string bench_out;
  bool save_models = false;
  auto* bench_cmd = app.add_subcommand("bench", "Train and evaluate heads on the synthetic box benchmark");
  bench_cmd->add_option("--heads", head_names, "Heads to train")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Seed for data, initialization and shuffling")->capture_default_str();
  bench_cmd->add_option("--train", bench.train_count, "Training samples")->capture_default_str();
  bench_cmd->add_option("--test", bench.test_count, "Test samples")->capture_default_str();
  bench_cmd->add_option("--square-test", bench.square_test_count, "Extra square-only test samples")
      ->capture_default_str();
  bench_cmd->add_option("--square-fraction", bench.square_fraction, "Fraction of squares in train/test")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  bench_cmd->add_option("--noise", bench.noise_sigma, "Feature noise standard deviation")->capture_default_str();
  bench_cmd->add_option("--epochs", bench.train.epochs)->capture_default_str();
  bench_cmd->add_option("--batch", bench.train.batch)->capture_default_str();
  bench_cmd->add_option("--lr", bench.train.learning_rate, "Initial learning rate")->capture_default_str();
  bench_cmd->add_option("--n-step", bench.train.n_step)->capture_default_str();
  bench_cmd->add_option("--sweep-nstep", bench.sweep_n_steps, "Comma-separated step counts")->delimiter(',');
  bench_cmd->add_option("--train-data", bench.train_path, "Training set CSV instead of generating one");
  bench_cmd->add_option("--test-data", bench.test_path, "Test set CSV instead of generating one");
  bench_cmd->add_option("--out", bench_out, "Output directory (default: $PSC_OUTPUT_DIR or bench_out)");
  bench_cmd->add_flag("--save-models", save_models, "Write model snapshots next to the reports");

  DatasetConfig gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic dataset CSV");
  gen_cmd->add_option("--count", gen.count)->capture_default_str();
  gen_cmd->add_option("--square-fraction", gen.square_fraction)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise_sigma)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output CSV path")->required();

  std::string model_path, data_path, eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model on a dataset CSV");
  eval_cmd->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--data", data_path)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_out, "Output directory (default: $PSC_OUTPUT_DIR or eval_out)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*encode_cmd) return cmd_encode(theta, n_step, dual);
    if (*decode_cmd) return cmd_decode(values, decode_dual_flag);
    if (*verify_cmd) return cmd_verify(verify_grid);
    if (*bench_cmd) {
      bench.heads = parse_heads(head_names);
      return cmd_bench(bench, resolve_output_dir(bench_out, "bench_out"), save_models);
    }
    if (*gen_cmd) return cmd_generate(gen, gen_out);
    if (*eval_cmd) return cmd_eval(model_path, data_path, resolve_output_dir(eval_out, "eval_out"));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
