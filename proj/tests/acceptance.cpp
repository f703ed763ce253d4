// Acceptance gate. One line per criterion, exit status 0 iff all pass.
//
//   acceptance                    run every criterion
//   acceptance --record-baseline  run, then (re)write the benchmark baseline
//
// The benchmark baseline pins the first recorded run of the seed-42 benchmark;
// later runs must stay within +/-20% of each recorded metric.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psc/bench_runner.hpp"
#include "psc/coder.hpp"
#include "psc/dual_coder.hpp"
#include "psc/grad_check.hpp"
#include "psc/regression_head.hpp"
#include "psc/regressor.hpp"

#ifndef PSC_BASELINE_FILE
#define PSC_BASELINE_FILE "tests/data/bench_baseline.json"
#endif

namespace {

using namespace psc;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr double kExact = 1e-9;
constexpr int kGrid = 10000;
constexpr double kBaselineTolerance = 0.20;

struct Outcome {
  bool passed = true;
  std::string detail;
};

int g_failures = 0;

void report(int id, const char* title, const Outcome& o, double seconds) {
  std::printf("[%s] %d. %s: %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", id, title, o.detail.c_str(), seconds);
  std::fflush(stdout);
  if (!o.passed) ++g_failures;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double circ(double a, double b, double period) { return angular_distance(a, b, period); }

double inf_norm(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> theta_grid_with_edges() {
  std::vector<double> grid;
  for (int i = 0; i < kGrid; ++i) grid.push_back(-kPi / 2.0 + kPi * i / kGrid);
  for (int k = 3; k <= 15; ++k) {
    const double eps = std::pow(10.0, -k);
    grid.push_back(-kPi / 2.0 + eps);
    grid.push_back(kPi / 2.0 - eps);
  }
  return grid;
}

// ---- coder-level criteria, parameterized by step count ----

double single_round_trip(int n) {
  const PhaseShifter shifter(n);
  double worst = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double phi = -kPi + kTwoPi * i / kGrid;
    worst = std::max(worst, circ(shifter.decode(shifter.encode(Phase(phi)).values()).radians(), phi, kTwoPi));
  }
  return worst;
}

double dual_round_trip(int n) {
  const DualCoder coder(n);
  double worst = 0.0;
  for (double theta : theta_grid_with_edges()) {
    worst = std::max(worst, circ(coder.decode_to_angle(coder.encode(Angle(theta))).radians, theta, kPi));
  }
  return worst;
}

// Largest ratio of observed code gap to the allowed 2 * k_freq * eps.
double boundary_ratio(int n) {
  const PhaseShifter shifter(n);
  const DualCoder dual(n);
  auto single = [&](double theta) { return shifter.encode(angle_to_phase(Angle(theta))); };
  const auto single_lower = single(-kPi / 2.0);
  const auto dual_lower = dual.encode(Angle(-kPi / 2.0)).flatten();
  double worst = 0.0;
  for (int k = 3; k <= 9; ++k) {
    const double eps = std::pow(10.0, -k);
    const double theta = kPi / 2.0 - eps;
    worst = std::max(worst, inf_norm(single(theta).values(), single_lower.values()) / (2.0 * 2.0 * eps));
    worst = std::max(worst, inf_norm(dual.encode(Angle(theta)).flatten(), dual_lower) / (2.0 * 4.0 * eps));
  }
  return worst;
}

struct SquareStats {
  double x2_gap = 0.0;
  double mod_quarter = 0.0;
  double mod_half = 0.0;
  int confident = 0;
};

SquareStats square_resolution(int n) {
  SquareStats s;
  const DualCoder coder(n);
  std::mt19937_64 rng(1000 + static_cast<unsigned>(n));
  std::uniform_real_distribution<double> noise(-0.2, 0.2);
  for (double theta : theta_grid_with_edges()) {
    const auto code = coder.encode(Angle(theta));
    const auto turned = coder.encode(Angle(wrap_phase(theta + kPi / 2.0, kPi)));
    s.x2_gap = std::max(s.x2_gap, inf_norm(code.high.values(), turned.high.values()));

    auto noisy = code;
    for (double& v : noisy.low.values()) v += noise(rng);
    const auto result = coder.decode(noisy);
    if (std::abs(result.delta) <= 0.5) continue;
    ++s.confident;
    const double theta_hat = result.phi.radians() / 2.0;
    s.mod_quarter = std::max(s.mod_quarter, circ(theta_hat, theta, kPi / 2.0));
    s.mod_half = std::max(s.mod_half, circ(theta_hat, theta, kPi));
  }
  return s;
}

struct Invariance {
  double offset = 0.0;
  double scale = 0.0;
};

Invariance decode_invariance(int n) {
  Invariance inv;
  const PhaseShifter shifter(n);
  std::mt19937_64 rng(2000 + static_cast<unsigned>(n));
  std::uniform_real_distribution<double> offset(-10.0, 10.0);
  std::uniform_real_distribution<double> log_scale(std::log(0.1), std::log(10.0));
  for (int i = 0; i < kGrid; ++i) {
    const double phi = -kPi + kTwoPi * i / kGrid;
    const auto code = shifter.encode(Phase(phi));
    const double clean = shifter.decode(code.values()).radians();
    auto shifted = code;
    auto scaled = code;
    const double c = (i == 0) ? 10.0 : (i == 1) ? -10.0 : offset(rng);
    const double a = (i == 0) ? 0.1 : (i == 1) ? 10.0 : std::exp(log_scale(rng));
    for (double& v : shifted.values()) v += c;
    for (double& v : scaled.values()) v *= a;
    inv.offset = std::max(inv.offset, circ(shifter.decode(shifted.values()).radians(), clean, kTwoPi));
    inv.scale = std::max(inv.scale, circ(shifter.decode(scaled.values()).radians(), clean, kTwoPi));
  }
  return inv;
}

// ---- criteria ----

Outcome criterion_round_trip() {
  double single = 0.0;
  for (int n : {3, 4, 5, 8}) single = std::max(single, single_round_trip(n));
  double dual = 0.0;
  for (int n : {3, 4, 5}) dual = std::max(dual, dual_round_trip(n));
  return {single <= kExact && dual <= kExact,
          fmt("max psc phase err %.2e, max pscd angle err %.2e (limit %.0e)", single, dual, kExact)};
}

Outcome criterion_boundary() {
  double worst = 0.0;
  for (int n : {3, 4, 5, 8}) worst = std::max(worst, boundary_ratio(n));
  return {worst <= 1.0, fmt("worst gap / (2 k eps) = %.3f over eps = 1e-3..1e-9 (limit 1)", worst)};
}

Outcome criterion_square() {
  SquareStats worst;
  int confident = 0;
  for (int n : {3, 4, 5}) {
    const auto s = square_resolution(n);
    worst.x2_gap = std::max(worst.x2_gap, s.x2_gap);
    worst.mod_quarter = std::max(worst.mod_quarter, s.mod_quarter);
    worst.mod_half = std::max(worst.mod_half, s.mod_half);
    confident += s.confident;
  }
  const bool ok = worst.x2_gap <= kExact && worst.mod_quarter <= kExact && confident > 0;
  return {ok, fmt("x2 gap %.2e; noisy-x1 err mod pi/2 %.2e (mod pi %.2e) on %d confident samples",
                  worst.x2_gap, worst.mod_quarter, worst.mod_half, confident)};
}

Outcome criterion_invariance() {
  Invariance worst;
  for (int n : {3, 4, 5, 8}) {
    const auto inv = decode_invariance(n);
    worst.offset = std::max(worst.offset, inv.offset);
    worst.scale = std::max(worst.scale, inv.scale);
  }
  return {worst.offset <= kExact && worst.scale <= kExact,
          fmt("offset |c|<=10: %.2e, scale a in [0.1,10]: %.2e (limit %.0e)", worst.offset, worst.scale, kExact)};
}

Outcome criterion_gradients() {
  constexpr double kLimit = 1e-4;
  std::mt19937_64 rng(3000);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  std::uniform_real_distribution<double> x(-8.0, 8.0);
  double squash_worst = 0.0, loss_worst = 0.0, net_worst = 0.0;
  int probes = 0;

  for (int i = 0; i < 400; ++i, ++probes) {
    const double at = x(rng);
    const double numeric = (squash(at + 1e-5) - squash(at - 1e-5)) / 2e-5;
    squash_worst = std::max(squash_worst, relative_error(squash_grad(at), numeric));
  }
  while (probes < 700) {
    std::vector<double> pred(4), gt(4);
    for (double& p : pred) p = v(rng);
    for (double& g : gt) g = v(rng);
    const auto analytic = angle_loss(pred, gt);
    const auto numeric = central_difference([&](std::span<const double> p) { return angle_loss(p, gt).loss; },
                                            pred, 1e-7);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (std::abs(pred[i] - gt[i]) < 1e-6) continue;
      loss_worst = std::max(loss_worst, relative_error(analytic.grad[i], numeric[i]));
      ++probes;
    }
  }
  int net_probes = 0;
  for (unsigned trial = 0; net_probes < 300; ++trial) {
    const Head head = std::array{Head::naive, Head::psc, Head::pscd}[trial % 3];
    Regressor model(8, {4}, head, 3, 3100 + trial);
    std::vector<std::vector<double>> inputs(3, std::vector<double>(8));
    std::vector<std::vector<double>> targets(3, std::vector<double>(static_cast<std::size_t>(model.output_dim())));
    for (auto& in : inputs) for (double& f : in) f = v(rng);
    for (auto& t : targets) for (double& f : t) f = 0.9 * v(rng);
    std::vector<double> analytic(model.parameters().size(), 0.0);
    ForwardCache cache;
    for (std::size_t s = 0; s < 3; ++s) {
      model.forward(inputs[s], cache);
      model.backward(cache, angle_loss(cache.output, targets[s]).grad, analytic);
    }
    Regressor probe = model;
    const auto numeric = central_difference(
        [&](std::span<const double> p) {
          std::copy(p.begin(), p.end(), probe.parameters().begin());
          double total = 0.0;
          for (std::size_t s = 0; s < 3; ++s) total += angle_loss(probe.predict(inputs[s]), targets[s]).loss;
          return total;
        },
        model.parameters(), 1e-5);
    for (std::size_t i = 0; i < analytic.size(); ++i, ++net_probes) {
      net_worst = std::max(net_worst, relative_error(analytic[i], numeric[i], 1e-6));
    }
  }
  probes += net_probes;
  const bool ok = squash_worst < kLimit && loss_worst < kLimit && net_worst < kLimit;
  return {ok, fmt("%d probes; max rel err squash %.1e, angle_loss %.1e, backprop %.1e (limit %.0e)", probes,
                  squash_worst, loss_worst, net_worst, kLimit)};
}

// ---- benchmark ----

struct BenchNumbers {
  double naive_boundary_median = 0.0;
  double psc_boundary_median = 0.0;
  double pscd_boundary_median = 0.0;
  double naive_median = 0.0;
  double psc_median = 0.0;
  double pscd_median = 0.0;
  double square_psc_median = 0.0;
  double square_pscd_median = 0.0;

  json to_json() const {
    return {{"naive_boundary_median", naive_boundary_median}, {"psc_boundary_median", psc_boundary_median},
            {"pscd_boundary_median", pscd_boundary_median},   {"naive_median", naive_median},
            {"psc_median", psc_median},                       {"pscd_median", pscd_median},
            {"square_psc_median", square_psc_median},         {"square_pscd_median", square_pscd_median}};
  }
};

const HeadRun& find_run(const BenchResult& r, Head head) {
  for (const HeadRun& run : r.runs) {
    if (run.head == head) return run;
  }
  throw std::runtime_error("missing head in bench result");
}

BenchNumbers run_pinned_benchmark(std::string& failure) {
  BenchNumbers out;
  // Rectangles: 5,000 train / 1,000 test, sigma 0.01, seed 42.
  BenchConfig rect;
  const auto rect_result = run_bench(rect);
  // Squares: same sizes, half the training boxes square, square-only test set.
  BenchConfig mixed;
  mixed.heads = {Head::psc, Head::pscd};
  mixed.square_fraction = 0.5;
  mixed.square_test_count = 1000;
  const auto mixed_result = run_bench(mixed);
  for (const auto* result : {&rect_result, &mixed_result}) {
    for (const HeadRun& run : result->runs) {
      if (run.diverged) failure += std::string(to_string(run.head)) + " diverged; ";
    }
  }
  if (!failure.empty()) return out;
  out.naive_boundary_median = find_run(rect_result, Head::naive).main->boundary.median;
  out.psc_boundary_median = find_run(rect_result, Head::psc).main->boundary.median;
  out.pscd_boundary_median = find_run(rect_result, Head::pscd).main->boundary.median;
  out.naive_median = find_run(rect_result, Head::naive).main->overall.median;
  out.psc_median = find_run(rect_result, Head::psc).main->overall.median;
  out.pscd_median = find_run(rect_result, Head::pscd).main->overall.median;
  out.square_psc_median = find_run(mixed_result, Head::psc).square->overall.median;
  out.square_pscd_median = find_run(mixed_result, Head::pscd).square->overall.median;
  return out;
}

Outcome criterion_benchmark(bool record) {
  std::string failure;
  const BenchNumbers b = run_pinned_benchmark(failure);
  if (!failure.empty()) return {false, failure};

  const bool boundary_ok = b.psc_boundary_median <= 0.5 * b.naive_boundary_median;
  const bool square_ok = b.square_pscd_median <= b.square_psc_median;
  std::string detail = fmt("(a) boundary median psc %.4f vs naive %.4f rad [%s]; "
                           "(b) square mod-90 median pscd %.4f vs psc %.4f rad [%s]",
                           b.psc_boundary_median, b.naive_boundary_median, boundary_ok ? "ok" : "FAIL",
                           b.square_pscd_median, b.square_psc_median, square_ok ? "ok" : "FAIL");

  const std::filesystem::path baseline_path = PSC_BASELINE_FILE;
  bool baseline_ok = true;
  if (record) {
    std::ofstream out(baseline_path);
    out << json{{"schema_version", 1}, {"seed", 42}, {"tolerance", kBaselineTolerance}, {"metrics", b.to_json()}}
               .dump(2)
        << '\n';
    detail += "; (c) baseline recorded to " + baseline_path.string();
  } else if (!std::filesystem::exists(baseline_path)) {
    baseline_ok = false;
    detail += "; (c) no baseline at " + baseline_path.string();
  } else {
    std::ifstream in(baseline_path);
    const json baseline = json::parse(in);
    const json current = b.to_json();
    std::string drift;
    for (const auto& [key, value] : baseline.at("metrics").items()) {
      const double want = value.get<double>();
      const double got = current.at(key).get<double>();
      if (std::abs(got - want) > kBaselineTolerance * std::abs(want)) {
        baseline_ok = false;
        drift += fmt(" %s=%.5f (baseline %.5f)", key.c_str(), got, want);
      }
    }
    detail += baseline_ok ? "; (c) all metrics within 20% of baseline" : "; (c) drift:" + drift;
  }
  return {boundary_ok && square_ok && baseline_ok, detail};
}

Outcome criterion_sweep() {
  std::string detail;
  bool ok = true;
  for (int n : {3, 4, 5}) {
    const double rt = std::max(single_round_trip(n), dual_round_trip(n));
    const double boundary = boundary_ratio(n);
    const auto sq = square_resolution(n);
    const auto inv = decode_invariance(n);
    const bool pass = rt <= kExact && boundary <= 1.0 && sq.x2_gap <= kExact && sq.mod_quarter <= kExact &&
                      inv.offset <= kExact && inv.scale <= kExact;
    ok = ok && pass;
    detail += fmt("N=%d %s (rt %.1e, inv %.1e); ", n, pass ? "pass" : "FAIL", rt, std::max(inv.offset, inv.scale));
  }
  return {ok, detail + "properties 1-4 identical across N"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_determinism() {
  BenchConfig cfg;
  cfg.train_count = 1000;
  cfg.test_count = 300;
  cfg.square_test_count = 200;
  cfg.train.epochs = 30;
  const auto root = std::filesystem::temp_directory_path() / "psc_acceptance_determinism";
  std::filesystem::remove_all(root);
  write_bench_outputs(run_bench(cfg), root / "a");
  write_bench_outputs(run_bench(cfg), root / "b");
  std::string differing;
  for (const char* name : {"report.csv", "report.json", "errors.csv", "losscurve.csv", "config.json"}) {
    if (slurp(root / "a" / name) != slurp(root / "b" / name)) differing += std::string(name) + " ";
  }
  return {differing.empty(), differing.empty() ? "two identical bench runs wrote byte-identical outputs"
                                               : "differs: " + differing};
}

void timed(int id, const char* title, double budget_seconds, const std::function<Outcome()>& fn) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double elapsed = seconds_since(start);
  if (budget_seconds > 0.0 && elapsed > budget_seconds) {
    o.passed = false;
    o.detail += fmt("; over time budget of %.0f s", budget_seconds);
  }
  report(id, title, o, elapsed);
}

}  // namespace

int main(int argc, char** argv) {
  const bool record = argc > 1 && std::strcmp(argv[1], "--record-baseline") == 0;

  timed(1, "round-trip exactness", 5.0, criterion_round_trip);
  timed(2, "boundary continuity", 0.0, criterion_boundary);
  timed(3, "square-like resolution", 0.0, criterion_square);
  timed(4, "decode invariances", 0.0, criterion_invariance);
  timed(5, "gradient checks", 30.0, criterion_gradients);
  timed(6, "benchmark directionality", 300.0, [&] { return criterion_benchmark(record); });
  timed(7, "N_step sweep", 0.0, criterion_sweep);
  timed(8, "bench determinism", 0.0, criterion_determinism);

  std::printf("%d of 8 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
