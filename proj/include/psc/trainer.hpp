#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "psc/dataset.hpp"
#include "psc/regression_head.hpp"
#include "psc/regressor.hpp"

namespace psc {

struct TrainConfig {
  int epochs = 200;
  int batch = 64;
  /// Decays to 1e-3 and then 1e-4 (see scheduled_learning_rate).
  double learning_rate = 1e-2;
  double momentum = 0.9;
  int n_step = 3;
  std::uint64_t seed = 42;
  std::vector<int> hidden{64, 64};
  /// l_cls and l_box are zero here; only the angle weight matters.
  LossWeights weights = LossWeights::with_default_angle(1.0, 1.0);
};

struct EpochStats {
  int epoch = 0;
  double learning_rate = 0.0;
  double angle_loss = 0.0;  // mean over samples
  double total_loss = 0.0;  // weighted, as optimized
};

struct TrainResult {
  Regressor model;
  std::vector<EpochStats> curve;
};

class TrainingDivergedError : public std::runtime_error {
 public:
  explicit TrainingDivergedError(int epoch);
  [[nodiscard]] int epoch() const { return epoch_; }

 private:
  int epoch_;
};

/// Step schedule: base rate, x0.1 from 60% of the epochs, x0.01 from 85%.
double scheduled_learning_rate(const TrainConfig& config, int epoch);

/// Mini-batch SGD with momentum on w3 * mean angle_loss. Single-threaded and
/// bitwise reproducible for a given seed. Throws TrainingDivergedError if an
/// epoch's loss is not finite.
TrainResult train(Head head, const TrainConfig& config, const std::vector<Sample>& data);

}  // namespace psc
