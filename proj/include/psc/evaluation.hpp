#pragma once

#include <cstddef>
#include <vector>

#include "psc/dataset.hpp"
#include "psc/head.hpp"
#include "psc/kernels.hpp"
#include "psc/regressor.hpp"

namespace psc {

/// Samples with |theta| above this are in the boundary region.
inline constexpr double kBoundaryMargin = 0.1;

struct EvalRecord {
  double theta_true = 0.0;
  double theta_pred = 0.0;
  double error = 0.0;  // angular distance under the sample's symmetry
  bool is_square = false;
  bool boundary = false;
  bool indeterminate = false;
};

struct ErrorSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
  double within_2deg = 0.0;
  double within_5deg = 0.0;
  double within_10deg = 0.0;
};

struct EvalReport {
  std::vector<EvalRecord> records;  // same order as the dataset
  std::size_t indeterminate = 0;
  ErrorSummary overall;
  ErrorSummary boundary;
};

/// Period used to score a sample: pi/2 for squares, pi for rectangles.
double error_period(const Sample& sample);

/// Aggregates a set of errors. The result does not depend on input order.
ErrorSummary summarize(std::vector<double> errors);

/// Turns raw head outputs (one row per sample) into angles and scores them.
/// Indeterminate decodes are counted and charged the worst-case error.
EvalReport score_predictions(Head head, int n_step, const std::vector<std::vector<double>>& outputs,
                             const std::vector<Sample>& data, Execution exec = Execution::parallel);

/// Runs the model over every sample and scores the result.
EvalReport evaluate(const Regressor& model, const std::vector<Sample>& data,
                    Execution exec = Execution::parallel);

}  // namespace psc
