#include "psc/bench_runner.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "psc/bench_io.hpp"
#include "psc/kernels.hpp"

namespace psc {
namespace {

using nlohmann::json;

constexpr const char* kReportHeader =
    "head,n_step,test_set,status,samples,indeterminate,mean_err,median_err,max_err,"
    "within_2deg,within_5deg,within_10deg,boundary_samples,boundary_mean_err,"
    "boundary_median_err,final_train_loss,coder_roundtrip_max_err";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

struct ReportRow {
  const HeadRun* run;
  std::string test_set;
  const EvalReport* report;  // null when training diverged
};

std::vector<ReportRow> report_rows(const std::vector<HeadRun>& runs) {
  std::vector<ReportRow> rows;
  for (const HeadRun& run : runs) {
    rows.push_back({&run, "main", run.main ? &*run.main : nullptr});
    if (run.square) rows.push_back({&run, "square", &*run.square});
  }
  return rows;
}

std::string csv_row(const ReportRow& row) {
  const HeadRun& run = *row.run;
  std::string s = std::string(to_string(run.head)) + ',' + std::to_string(run.n_step) + ',' +
                  row.test_set + ',' + (run.diverged ? "diverged" : "ok") + ',';
  if (row.report) {
    const EvalReport& r = *row.report;
    s += std::to_string(r.overall.count) + ',' + std::to_string(r.indeterminate) + ',' +
         num(r.overall.mean) + ',' + num(r.overall.median) + ',' + num(r.overall.max) + ',' +
         num(r.overall.within_2deg) + ',' + num(r.overall.within_5deg) + ',' +
         num(r.overall.within_10deg) + ',' + std::to_string(r.boundary.count) + ',' +
         num(r.boundary.mean) + ',' + num(r.boundary.median) + ',';
  } else {
    s += ",,,,,,,,,,,";
  }
  s += run.curve.empty() ? "" : num(run.curve.back().angle_loss);
  s += ',';
  s += run.coder_round_trip ? num(*run.coder_round_trip) : "";
  return s;
}

json summary_json(const ErrorSummary& s) {
  return {{"count", s.count},           {"mean", s.mean},
          {"median", s.median},         {"max", s.max},
          {"within_2deg", s.within_2deg}, {"within_5deg", s.within_5deg},
          {"within_10deg", s.within_10deg}};
}

json row_json(const ReportRow& row) {
  const HeadRun& run = *row.run;
  json j{{"head", to_string(run.head)},
         {"n_step", run.n_step},
         {"test_set", row.test_set},
         {"status", run.diverged ? "diverged" : "ok"}};
  if (!run.message.empty()) j["message"] = run.message;
  if (row.report) {
    j["indeterminate"] = row.report->indeterminate;
    j["overall"] = summary_json(row.report->overall);
    j["boundary"] = summary_json(row.report->boundary);
  }
  if (!run.curve.empty()) j["final_train_loss"] = run.curve.back().angle_loss;
  if (run.coder_round_trip) j["coder_roundtrip_max_err"] = *run.coder_round_trip;
  return j;
}

void write_report(const std::vector<HeadRun>& runs, const std::filesystem::path& dir) {
  const auto rows = report_rows(runs);
  auto csv = open_out(dir / "report.csv");
  csv << schema_row() << '\n' << kReportHeader << '\n';
  json j{{"schema_version", kSchemaVersion}, {"rows", json::array()}};
  for (const ReportRow& row : rows) {
    csv << csv_row(row) << '\n';
    j["rows"].push_back(row_json(row));
  }
  auto out = open_out(dir / "report.json");
  out << j.dump(2) << '\n';
}

void write_errors(const std::vector<HeadRun>& runs, const std::filesystem::path& dir) {
  auto csv = open_out(dir / "errors.csv");
  csv << schema_row() << '\n'
      << "head,n_step,test_set,index,theta_true,theta_pred,error,is_square,boundary,indeterminate\n";
  for (const ReportRow& row : report_rows(runs)) {
    if (!row.report) continue;
    const auto& records = row.report->records;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const EvalRecord& r = records[i];
      csv << to_string(row.run->head) << ',' << row.run->n_step << ',' << row.test_set << ',' << i
          << ',' << num(r.theta_true) << ',' << num(r.theta_pred) << ',' << num(r.error) << ','
          << r.is_square << ',' << r.boundary << ',' << r.indeterminate << '\n';
    }
  }
}

void write_loss_curves(const std::vector<HeadRun>& runs, const std::filesystem::path& dir) {
  auto csv = open_out(dir / "losscurve.csv");
  csv << schema_row() << '\n' << "head,n_step,epoch,learning_rate,angle_loss,total_loss\n";
  for (const HeadRun& run : runs) {
    for (const EpochStats& e : run.curve) {
      csv << to_string(run.head) << ',' << run.n_step << ',' << e.epoch << ','
          << num(e.learning_rate) << ',' << num(e.angle_loss) << ',' << num(e.total_loss) << '\n';
    }
  }
}

}  // namespace

double coder_round_trip_error(Head head, int n_step, int grid_points) {
  std::vector<double> thetas(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    thetas[static_cast<std::size_t>(i)] = -kPi / 2.0 + kPi * i / grid_points;
  }
  std::vector<double> decoded(thetas.size());
  std::vector<std::uint8_t> valid(thetas.size());
  switch (head) {
    case Head::naive:
      return 0.0;
    case Head::psc: {
      const PhaseShifter shifter(n_step);
      std::vector<double> phases(thetas.size());
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        phases[i] = angle_to_phase(Angle(thetas[i])).radians();
      }
      std::vector<double> codes(thetas.size() * static_cast<std::size_t>(n_step));
      kernels::encode_batch(phases, shifter, codes);
      kernels::decode_batch(codes, shifter, decoded, valid);
      for (double& d : decoded) d /= kLowMultiplier;
      break;
    }
    case Head::pscd: {
      const DualCoder coder(n_step);
      std::vector<double> codes(thetas.size() * 2 * static_cast<std::size_t>(n_step));
      kernels::encode_dual_batch(thetas, coder, codes);
      kernels::decode_dual_batch(codes, coder, decoded, valid);
      break;
    }
  }
  for (std::uint8_t ok : valid) {
    if (!ok) return kPi / 2.0;
  }
  return kernels::max_angular_distance(thetas, decoded, kPi);
}

BenchResult run_bench(const BenchConfig& config, std::ostream* log) {
  if (config.heads.empty()) throw std::invalid_argument("bench: no heads selected");
  BenchResult result{config, {}};

  const auto train_set = config.train_path.empty()
                             ? generate_dataset({config.train_count, config.square_fraction,
                                                 config.noise_sigma, config.seed})
                             : read_dataset_csv(config.train_path);
  const auto test_set = config.test_path.empty()
                            ? generate_dataset({config.test_count, config.square_fraction,
                                                config.noise_sigma, config.seed + 1})
                            : read_dataset_csv(config.test_path);
  std::vector<Sample> square_set;
  if (config.square_test_count > 0) {
    square_set = generate_dataset({config.square_test_count, 1.0, config.noise_sigma, config.seed + 2});
  }

  std::vector<int> steps = config.sweep_n_steps;
  if (steps.empty()) steps.push_back(config.train.n_step);

  bool naive_done = false;
  for (int n_step : steps) {
    for (Head head : config.heads) {
      if (head == Head::naive) {
        if (naive_done) continue;
        naive_done = true;
      }
      HeadRun run;
      run.head = head;
      run.n_step = head == Head::naive ? 0 : n_step;
      TrainConfig train_cfg = config.train;
      train_cfg.n_step = head == Head::naive ? kDefaultSteps : n_step;
      train_cfg.seed = config.seed;
      if (log) *log << "training " << to_string(head) << " (n_step " << run.n_step << ")" << std::endl;
      try {
        auto trained = train(head, train_cfg, train_set);
        run.curve = std::move(trained.curve);
        run.main = evaluate(trained.model, test_set);
        if (!square_set.empty()) run.square = evaluate(trained.model, square_set);
        run.model = std::move(trained.model);
      } catch (const TrainingDivergedError& e) {
        run.diverged = true;
        run.message = e.what();
        if (log) *log << "  " << e.what() << std::endl;
      }
      if (head != Head::naive) run.coder_round_trip = coder_round_trip_error(head, n_step);
      result.runs.push_back(std::move(run));
    }
  }
  return result;
}

json config_to_json(const BenchConfig& c) {
  json heads = json::array();
  for (Head h : c.heads) heads.push_back(to_string(h));
  return {{"schema_version", kSchemaVersion},
          {"heads", heads},
          {"train_count", c.train_count},
          {"test_count", c.test_count},
          {"square_test_count", c.square_test_count},
          {"square_fraction", c.square_fraction},
          {"noise_sigma", c.noise_sigma},
          {"seed", c.seed},
          {"sweep_n_steps", c.sweep_n_steps},
          {"train_path", c.train_path},
          {"test_path", c.test_path},
          {"train",
           {{"epochs", c.train.epochs},
            {"batch", c.train.batch},
            {"learning_rate", c.train.learning_rate},
            {"momentum", c.train.momentum},
            {"n_step", c.train.n_step},
            {"hidden", c.train.hidden},
            {"loss_weights",
             {{"w1", c.train.weights.classification},
              {"w2", c.train.weights.box},
              {"w3", c.train.weights.angle}}}}}};
}

void write_bench_outputs(const BenchResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_report(result.runs, dir);
  write_errors(result.runs, dir);
  write_loss_curves(result.runs, dir);
  auto out = open_out(dir / "config.json");
  out << config_to_json(result.config).dump(2) << '\n';
}

void write_eval_outputs(const HeadRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<HeadRun> runs{run};
  write_report(runs, dir);
  write_errors(runs, dir);
}

}  // namespace psc
