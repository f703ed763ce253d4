#include "psc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "psc/coder.hpp"
#include "psc/dataset.hpp"
#include "psc/dual_coder.hpp"
#include "psc/evaluation.hpp"
#include "psc/grad_check.hpp"
#include "psc/kernels.hpp"
#include "psc/regression_head.hpp"
#include "psc/regressor.hpp"

namespace psc {
namespace {

constexpr double kExact = 1e-9;

struct Check {
  bool passed = true;
  double worst = 0.0;
  std::string note;

  // Records `value` and fails the check if it exceeds `limit`.
  void bound(double value, double limit) {
    worst = std::max(worst, value);
    if (!(value <= limit)) passed = false;
  }
};

std::string describe(const Check& c, const char* label, double limit) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %.3e (limit %.1e)%s%s", label, c.worst, limit,
                c.note.empty() ? "" : "; ", c.note.c_str());
  return buf;
}

std::vector<double> phase_grid(int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = -kPi + kTwoPi * i / points;
  }
  return grid;
}

std::vector<double> angle_grid(int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = -kPi / 2.0 + kPi * i / points;
  }
  // Both ends of the range, approached from inside.
  for (int k = 3; k <= 12; ++k) {
    const double eps = std::pow(10.0, -k);
    grid.push_back(-kPi / 2.0 + eps);
    grid.push_back(kPi / 2.0 - eps);
  }
  return grid;
}

double phase_error(Phase a, Phase b) { return angular_distance(a.radians(), b.radians(), kTwoPi); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

PropertyResult round_trip(const VerifyOptions& opt) {
  Check c;
  const auto grid = phase_grid(opt.grid_points);
  for (int n : opt.n_steps) {
    const PhaseShifter shifter(n);
    std::vector<double> codes(grid.size() * static_cast<std::size_t>(n));
    std::vector<double> decoded(grid.size());
    std::vector<std::uint8_t> valid(grid.size());
    kernels::encode_batch(grid, shifter, codes);
    if (kernels::decode_batch(codes, shifter, decoded, valid) != 0) c.passed = false;
    c.bound(kernels::max_angular_distance(grid, decoded, kTwoPi), kExact);
  }
  return {"coder.round_trip", c.passed, describe(c, "max |decode(encode(phi)) - phi|", kExact)};
}

PropertyResult dc_offset(const VerifyOptions& opt) {
  Check c;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> offset(-10.0, 10.0);
  const auto grid = phase_grid(opt.grid_points / 10);
  for (int n : opt.n_steps) {
    const PhaseShifter shifter(n);
    for (double phi : grid) {
      auto code = shifter.encode(Phase(phi));
      const Phase clean = shifter.decode(code.values());
      const double shift = offset(rng);
      for (double& v : code.values()) v += shift;
      c.bound(phase_error(shifter.decode(code.values()), clean), kExact);
    }
  }
  return {"coder.dc_offset_invariance", c.passed, describe(c, "max deviation", kExact)};
}

PropertyResult positive_scale(const VerifyOptions& opt) {
  Check c;
  std::mt19937_64 rng(opt.seed + 1);
  std::uniform_real_distribution<double> log_scale(std::log(0.1), std::log(10.0));
  const auto grid = phase_grid(opt.grid_points / 10);
  for (int n : opt.n_steps) {
    const PhaseShifter shifter(n);
    for (double phi : grid) {
      auto code = shifter.encode(Phase(phi));
      const double a = std::exp(log_scale(rng));
      for (double& v : code.values()) v *= a;
      c.bound(phase_error(shifter.decode(code.values()), Phase(phi)), kExact);
    }
  }
  return {"coder.positive_scale_invariance", c.passed, describe(c, "max deviation", kExact)};
}

PropertyResult boundary_continuity(const VerifyOptions& opt) {
  Check c;
  const SymmetryConfig rect = SymmetryConfig::rectangle();
  std::mt19937_64 rng(opt.seed + 2);
  std::uniform_real_distribution<double> angle(rect.lower(), rect.upper());
  for (int n : opt.n_steps) {
    const PhaseShifter shifter(n);
    auto code_of = [&](double theta) { return shifter.encode(angle_to_phase(Angle(theta), rect)); };
    // Lipschitz bound k * distance over random pairs.
    for (int i = 0; i < 2000; ++i) {
      const double a = angle(rng);
      const double b = angle(rng);
      const double gap = max_abs_diff(code_of(a).values(), code_of(b).values());
      const double allowed = rect.multiplier() * angular_distance(a, b, rect.period()) + 1e-12;
      c.bound(gap - allowed, 0.0);
    }
    // Approaching the wrap-around point from both sides.
    const auto lower = code_of(-kPi / 2.0);
    for (int k = 3; k <= 9; ++k) {
      const double eps = std::pow(10.0, -k);
      const double gap = max_abs_diff(code_of(kPi / 2.0 - eps).values(), lower.values());
      c.bound(gap - 2.0 * rect.multiplier() * eps, 0.0);
    }
  }
  return {"coder.boundary_continuity", c.passed,
          describe(c, "max excess over k*distance", 0.0)};
}

PropertyResult noise_robustness(const VerifyOptions& opt) {
  Check c;
  constexpr double kLimit = 0.15;
  std::mt19937_64 rng(opt.seed + 3);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  const auto grid = phase_grid(opt.grid_points);
  for (int n : opt.n_steps) {
    const PhaseShifter shifter(n);
    for (double phi : grid) {
      auto code = shifter.encode(Phase(phi));
      for (double& v : code.values()) v += noise(rng);
      c.bound(phase_error(shifter.decode(code.values()), Phase(phi)), kLimit);
    }
  }
  return {"coder.noise_robustness", c.passed, describe(c, "max phase error", kLimit)};
}

PropertyResult encode_range(const VerifyOptions& opt) {
  Check c;
  const auto grid = phase_grid(opt.grid_points);
  for (int n : opt.n_steps) {
    const PhaseShifter shifter(n);
    for (double phi : grid) {
      const PhaseCode code = shifter.encode(Phase(phi));
      for (double v : code.values()) c.bound(std::abs(v), 1.0);
    }
  }
  return {"coder.encode_range", c.passed, describe(c, "max |x_n|", 1.0)};
}

std::vector<int> dual_steps(const VerifyOptions& opt) {
  std::vector<int> steps;
  for (int n : opt.n_steps) {
    if (n <= 5) steps.push_back(n);
  }
  return steps.empty() ? opt.n_steps : steps;
}

PropertyResult dual_round_trip(const VerifyOptions& opt) {
  Check c;
  const auto grid = angle_grid(opt.grid_points);
  for (int n : dual_steps(opt)) {
    const DualCoder coder(n);
    const auto width = 2 * static_cast<std::size_t>(n);
    std::vector<double> codes(grid.size() * width);
    std::vector<double> decoded(grid.size());
    std::vector<std::uint8_t> valid(grid.size());
    kernels::encode_dual_batch(grid, coder, codes);
    if (kernels::decode_dual_batch(codes, coder, decoded, valid) != 0) c.passed = false;
    c.bound(kernels::max_angular_distance(grid, decoded, kPi), kExact);
  }
  return {"dual.round_trip", c.passed, describe(c, "max angle error", kExact)};
}

PropertyResult unwrap_consistency(const VerifyOptions& opt) {
  Check c;
  const auto grid = angle_grid(opt.grid_points / 10);
  for (int n : dual_steps(opt)) {
    const DualCoder coder(n);
    const PhaseShifter shifter(n);
    for (double theta : grid) {
      const auto code = coder.encode(Angle(theta));
      const auto result = coder.decode(code);
      const Phase high = shifter.decode(code.high.values());
      c.bound(phase_error(Phase(2.0 * result.phi.radians()), high), kExact);
      if (!(result.phi.radians() >= -kPi && result.phi.radians() < kPi)) c.passed = false;
    }
  }
  return {"dual.unwrap_consistency", c.passed, describe(c, "max |wrap(2 phi) - phi2|", kExact)};
}

PropertyResult branch_robustness(const VerifyOptions& opt) {
  Check c;
  std::mt19937_64 rng(opt.seed + 4);
  std::uniform_real_distribution<double> noise(-0.2, 0.2);
  const auto grid = angle_grid(opt.grid_points / 5);
  std::size_t confident = 0;
  for (int n : dual_steps(opt)) {
    const DualCoder coder(n);
    for (double theta : grid) {
      auto code = coder.encode(Angle(theta));
      for (double& v : code.low.values()) v += noise(rng);
      const auto result = coder.decode(code);
      if (std::abs(result.delta) <= 0.5) continue;
      ++confident;
      const double err = angular_distance(result.phi.radians() / kLowMultiplier, theta, kPi);
      c.bound(err, kExact);
    }
  }
  c.note = std::to_string(confident) + " samples with |delta| > 0.5";
  return {"dual.branch_robustness", c.passed, describe(c, "max angle error", kExact)};
}

PropertyResult square_invariance(const VerifyOptions& opt) {
  Check c;
  const auto grid = angle_grid(opt.grid_points / 10);
  for (int n : dual_steps(opt)) {
    const DualCoder coder(n);
    for (double theta : grid) {
      const double turned = wrap_phase(theta + kPi / 2.0, kPi);
      const auto a = coder.encode(Angle(theta));
      const auto b = coder.encode(Angle(turned));
      c.bound(max_abs_diff(a.high.values(), b.high.values()), kExact);
    }
  }
  return {"dual.square_invariance", c.passed, describe(c, "max |x2(theta) - x2(theta+pi/2)|", kExact)};
}

PropertyResult squash_shape(const VerifyOptions& opt) {
  Check c;
  std::mt19937_64 rng(opt.seed + 5);
  std::uniform_real_distribution<double> x(-60.0, 60.0);
  double prev_x = -1e300;
  double prev_y = -1.0;
  std::vector<double> xs(2000);
  for (double& v : xs) v = x(rng);
  std::sort(xs.begin(), xs.end());
  for (double v : xs) {
    const double y = squash(v);
    if (!(y > -1.0 && y < 1.0) && std::abs(v) < 30.0) c.passed = false;
    if (!(y >= -1.0 && y <= 1.0)) c.passed = false;
    if (v > prev_x && y < prev_y) c.passed = false;
    c.bound(std::abs(squash(-v) + y), 1e-15);
    prev_x = v;
    prev_y = y;
  }
  return {"head.squash_range_odd_monotone", c.passed, describe(c, "max |squash(-x) + squash(x)|", 1e-15)};
}

PropertyResult squash_gradient(const VerifyOptions& opt) {
  Check c;
  constexpr double kLimit = 1e-5;
  std::mt19937_64 rng(opt.seed + 6);
  std::uniform_real_distribution<double> x(-8.0, 8.0);
  for (int i = 0; i < 500; ++i) {
    const double v = x(rng);
    const double numeric = (squash(v + 1e-5) - squash(v - 1e-5)) / 2e-5;
    c.bound(relative_error(squash_grad(v), numeric), kLimit);
  }
  return {"head.squash_gradient", c.passed, describe(c, "max relative error", kLimit)};
}

PropertyResult loss_gradient(const VerifyOptions& opt) {
  Check c;
  constexpr double kLimit = 1e-5;
  std::mt19937_64 rng(opt.seed + 7);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  int probes = 0;
  while (probes < 250) {
    std::vector<double> pred(3), gt(3);
    for (double& p : pred) p = v(rng);
    for (double& g : gt) g = v(rng);
    const auto analytic = angle_loss(pred, gt);
    if (analytic.loss < 0.0) c.passed = false;
    auto f = [&](std::span<const double> p) { return angle_loss(p, gt).loss; };
    const auto numeric = central_difference(f, pred, 1e-6);
    for (std::size_t i = 0; i < pred.size(); ++i, ++probes) {
      if (std::abs(pred[i] - gt[i]) < 1e-5) continue;  // L1 kink
      c.bound(relative_error(analytic.grad[i], numeric[i]), kLimit);
    }
  }
  return {"head.angle_loss_gradient", c.passed, describe(c, "max relative error", kLimit)};
}

PropertyResult backprop_gradient(const VerifyOptions& opt) {
  Check c;
  constexpr double kLimit = 1e-4;
  std::mt19937_64 rng(opt.seed + 8);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  int probes = 0;
  for (Head head : {Head::naive, Head::psc, Head::pscd}) {
    Regressor model(8, {4, 4}, head, 3, opt.seed + 9);
    // Bias away from the rectifier kink so finite differences stay on one side.
    auto params = model.parameters();
    for (double& p : params) p += 0.05 * v(rng);
    std::vector<std::vector<double>> inputs(3, std::vector<double>(8));
    std::vector<std::vector<double>> targets(3, std::vector<double>(static_cast<std::size_t>(model.output_dim())));
    for (auto& in : inputs) for (double& x : in) x = v(rng);
    for (auto& t : targets) for (double& x : t) x = 0.9 * v(rng);

    auto batch_loss = [&](const Regressor& m) {
      double total = 0.0;
      for (std::size_t s = 0; s < inputs.size(); ++s) {
        total += angle_loss(m.predict(inputs[s]), targets[s]).loss;
      }
      return total;
    };
    std::vector<double> analytic(params.size(), 0.0);
    ForwardCache cache;
    for (std::size_t s = 0; s < inputs.size(); ++s) {
      model.forward(inputs[s], cache);
      const auto loss = angle_loss(cache.output, targets[s]);
      model.backward(cache, loss.grad, analytic);
    }
    Regressor probe = model;
    auto f = [&](std::span<const double> p) {
      std::copy(p.begin(), p.end(), probe.parameters().begin());
      return batch_loss(probe);
    };
    const auto numeric = central_difference(f, model.parameters(), 1e-5);
    for (std::size_t i = 0; i < analytic.size(); ++i, ++probes) {
      // Dead rectifier units have exact zero gradients; the floor keeps
      // finite-difference roundoff (~1e-11) from reading as relative error.
      c.bound(relative_error(analytic[i], numeric[i], 1e-6), kLimit);
    }
  }
  c.note = std::to_string(probes) + " parameters";
  return {"regressor.backprop_gradient", c.passed, describe(c, "max relative error", kLimit)};
}

PropertyResult end_to_end_identity(const VerifyOptions& opt) {
  Check c;
  const auto data = generate_dataset({2000, 0.3, 0.0, opt.seed});
  for (Head head : {Head::psc, Head::pscd}) {
    for (int n : dual_steps(opt)) {
      std::vector<std::vector<double>> outputs;
      outputs.reserve(data.size());
      for (const Sample& s : data) outputs.push_back(head_target(head, s.target_theta, n));
      const auto report = score_predictions(head, n, outputs, data);
      if (report.indeterminate != 0) c.passed = false;
      // Score against the full rectangle period, not the square one.
      for (const EvalRecord& r : report.records) {
        c.bound(angular_distance(r.theta_pred, r.theta_true, kPi), kExact);
      }
    }
  }
  return {"bench.end_to_end_identity", c.passed, describe(c, "max angle error", kExact)};
}

PropertyResult feature_periodicity(const VerifyOptions& opt) {
  Check c;
  const auto data = generate_dataset({2000, 0.0, 0.0, opt.seed + 10});
  for (const Sample& s : data) {
    const auto a = corner_features(s.box, s.box.theta);
    const auto b = corner_features(s.box, wrap_phase(s.box.theta + kPi, kTwoPi));
    c.bound(max_abs_diff(a, b), 1e-12);
  }
  return {"bench.feature_pi_periodicity", c.passed, describe(c, "max feature difference", 1e-12)};
}

PropertyResult parallel_matches_serial(const VerifyOptions& opt) {
  Check c;
  const auto grid = angle_grid(opt.grid_points);
  const DualCoder coder(3);
  std::vector<double> serial_codes(grid.size() * 6), parallel_codes(grid.size() * 6);
  kernels::encode_dual_batch(grid, coder, serial_codes, Execution::serial);
  kernels::encode_dual_batch(grid, coder, parallel_codes, Execution::parallel);
  std::vector<double> ts(grid.size()), tp(grid.size());
  std::vector<std::uint8_t> vs(grid.size()), vp(grid.size());
  kernels::decode_dual_batch(serial_codes, coder, ts, vs, Execution::serial);
  kernels::decode_dual_batch(parallel_codes, coder, tp, vp, Execution::parallel);
  if (serial_codes != parallel_codes || ts != tp || vs != vp) c.passed = false;
  c.note = std::to_string(parallel_threads()) + " threads";
  return {"kernels.parallel_matches_serial", c.passed, c.passed ? "bitwise equal; " + c.note : "outputs differ"};
}

}  // namespace

std::vector<PropertyResult> run_verification(const VerifyOptions& options) {
  using Property = PropertyResult (*)(const VerifyOptions&);
  struct Entry {
    const char* name;
    Property run;
  };
  static constexpr Entry kProperties[] = {
      {"coder.round_trip", round_trip},
      {"coder.dc_offset_invariance", dc_offset},
      {"coder.positive_scale_invariance", positive_scale},
      {"coder.boundary_continuity", boundary_continuity},
      {"coder.noise_robustness", noise_robustness},
      {"coder.encode_range", encode_range},
      {"dual.round_trip", dual_round_trip},
      {"dual.unwrap_consistency", unwrap_consistency},
      {"dual.branch_robustness", branch_robustness},
      {"dual.square_invariance", square_invariance},
      {"head.squash_range_odd_monotone", squash_shape},
      {"head.squash_gradient", squash_gradient},
      {"head.angle_loss_gradient", loss_gradient},
      {"regressor.backprop_gradient", backprop_gradient},
      {"bench.end_to_end_identity", end_to_end_identity},
      {"bench.feature_pi_periodicity", feature_periodicity},
      {"kernels.parallel_matches_serial", parallel_matches_serial},
  };
  std::vector<PropertyResult> results;
  for (const Entry& property : kProperties) {
    const auto start = std::chrono::steady_clock::now();
    PropertyResult r;
    try {
      r = property.run(options);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("threw: ") + e.what();
    }
    r.name = property.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace psc
