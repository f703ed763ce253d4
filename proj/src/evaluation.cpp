#include "psc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psc {
namespace {

using Index = std::ptrdiff_t;

// Decodes one output row; returns false for an indeterminate phase.
bool decode_output(Head head, const PhaseShifter& shifter, const DualCoder& dual,
                   const std::vector<double>& output, double& theta) {
  switch (head) {
    case Head::naive:
      theta = output.at(0);
      return std::isfinite(theta);
    case Head::psc: {
      Phase phi;
      if (!shifter.try_decode(output, phi)) return false;
      theta = phi.radians() / kLowMultiplier;
      return true;
    }
    case Head::pscd: {
      UnwrapResult result;
      if (!dual.try_decode(output, result)) return false;
      theta = result.phi.radians() / kLowMultiplier;
      return true;
    }
  }
  return false;
}

EvalRecord score_one(Head head, const PhaseShifter& shifter, const DualCoder& dual,
                     const std::vector<double>& output, const Sample& sample) {
  EvalRecord rec;
  rec.theta_true = sample.target_theta.radians;
  rec.is_square = sample.is_square;
  rec.boundary = std::abs(rec.theta_true) > kPi / 2.0 - kBoundaryMargin;
  const double period = error_period(sample);
  double theta = 0.0;
  if (decode_output(head, shifter, dual, output, theta)) {
    rec.theta_pred = theta;
    rec.error = angular_distance(theta, rec.theta_true, period);
  } else {
    rec.indeterminate = true;
    rec.theta_pred = 0.0;
    rec.error = period / 2.0;
  }
  return rec;
}

}  // namespace

double error_period(const Sample& sample) { return sample.is_square ? kPi / 2.0 : kPi; }

ErrorSummary summarize(std::vector<double> errors) {
  ErrorSummary s;
  s.count = errors.size();
  if (errors.empty()) {
    return s;
  }
  std::sort(errors.begin(), errors.end());
  double sum = 0.0;
  std::size_t w2 = 0, w5 = 0, w10 = 0;
  for (double e : errors) {
    sum += e;
    w2 += e <= to_radians(2.0) ? 1 : 0;
    w5 += e <= to_radians(5.0) ? 1 : 0;
    w10 += e <= to_radians(10.0) ? 1 : 0;
  }
  const auto n = static_cast<double>(errors.size());
  const std::size_t mid = errors.size() / 2;
  s.mean = sum / n;
  s.median = errors.size() % 2 == 1 ? errors[mid] : 0.5 * (errors[mid - 1] + errors[mid]);
  s.max = errors.back();
  s.within_2deg = static_cast<double>(w2) / n;
  s.within_5deg = static_cast<double>(w5) / n;
  s.within_10deg = static_cast<double>(w10) / n;
  return s;
}

EvalReport score_predictions(Head head, int n_step, const std::vector<std::vector<double>>& outputs,
                             const std::vector<Sample>& data, Execution exec) {
  if (outputs.size() != data.size()) {
    throw std::invalid_argument("score_predictions: one output row per sample required");
  }
  const auto width = static_cast<std::size_t>(output_dim(head, n_step));
  for (const auto& row : outputs) {
    if (row.size() != width) {
      throw std::invalid_argument("score_predictions: output row width does not match head");
    }
  }
  const int steps = head == Head::naive ? kDefaultSteps : n_step;
  const PhaseShifter shifter(steps);
  const DualCoder dual(steps);

  EvalReport report;
  report.records.resize(data.size());
  const auto rows = static_cast<Index>(data.size());
  if (exec == Execution::serial) {
    for (Index i = 0; i < rows; ++i) {
      report.records[i] = score_one(head, shifter, dual, outputs[i], data[i]);
    }
  } else {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < rows; ++i) {
      report.records[i] = score_one(head, shifter, dual, outputs[i], data[i]);
    }
  }

  std::vector<double> all;
  std::vector<double> boundary;
  all.reserve(report.records.size());
  for (const EvalRecord& r : report.records) {
    all.push_back(r.error);
    if (r.boundary) boundary.push_back(r.error);
    if (r.indeterminate) ++report.indeterminate;
  }
  report.overall = summarize(std::move(all));
  report.boundary = summarize(std::move(boundary));
  return report;
}

EvalReport evaluate(const Regressor& model, const std::vector<Sample>& data, Execution exec) {
  std::vector<std::vector<double>> outputs(data.size());
  for (const Sample& s : data) {
    if (s.features.size() != static_cast<std::size_t>(model.input_dim())) {
      throw std::invalid_argument("evaluate: feature dimension does not match the model");
    }
  }
  const auto rows = static_cast<Index>(data.size());
  if (exec == Execution::serial) {
    for (Index i = 0; i < rows; ++i) {
      outputs[i] = model.predict(data[i].features);
    }
  } else {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < rows; ++i) {
      outputs[i] = model.predict(data[i].features);
    }
  }
  return score_predictions(model.head(), model.n_step(), outputs, data, exec);
}

}  // namespace psc
