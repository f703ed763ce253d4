#include "psc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace psc {

TrainingDivergedError::TrainingDivergedError(int epoch)
    : std::runtime_error("training diverged at epoch " + std::to_string(epoch)), epoch_(epoch) {}

double scheduled_learning_rate(const TrainConfig& config, int epoch) {
  double rate = config.learning_rate;
  if (epoch >= static_cast<int>(0.60 * config.epochs)) rate *= 0.1;
  if (epoch >= static_cast<int>(0.85 * config.epochs)) rate *= 0.1;
  return rate;
}

TrainResult train(Head head, const TrainConfig& config, const std::vector<Sample>& data) {
  if (config.epochs <= 0 || config.batch <= 0) {
    throw std::invalid_argument("train: epochs and batch must be positive");
  }
  if (!(config.learning_rate > 0.0) || !(config.momentum >= 0.0 && config.momentum < 1.0)) {
    throw std::invalid_argument("train: bad learning rate or momentum");
  }
  if (data.empty()) {
    throw std::invalid_argument("train: empty dataset");
  }
  const int input_dim = static_cast<int>(data.front().features.size());

  TrainResult result{Regressor(input_dim, config.hidden, head, config.n_step, config.seed), {}};
  Regressor& model = result.model;

  std::vector<std::vector<double>> targets;
  targets.reserve(data.size());
  for (const Sample& s : data) {
    targets.push_back(head_target(head, s.target_theta, config.n_step));
  }

  const std::size_t n_params = model.parameters().size();
  std::vector<double> grad(n_params);
  std::vector<double> velocity(n_params, 0.0);
  std::vector<double> grad_output(static_cast<std::size_t>(model.output_dim()));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Separate stream from the initializer so shuffling never perturbs init.
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  ForwardCache cache;

  const double angle_weight = config.weights.angle;
  const auto batch_size = static_cast<std::size_t>(config.batch);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    const double rate = scheduled_learning_rate(config, epoch);
    double epoch_loss = 0.0;

    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t stop = std::min(order.size(), start + batch_size);
      const double scale = angle_weight / static_cast<double>(stop - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t idx = order[k];
        model.forward(data[idx].features, cache);
        epoch_loss += angle_loss(cache.output, targets[idx], grad_output);
        for (double& g : grad_output) {
          g *= scale;
        }
        model.backward(cache, grad_output, grad);
      }
      auto params = model.parameters();
      for (std::size_t p = 0; p < n_params; ++p) {
        velocity[p] = config.momentum * velocity[p] + grad[p];
        params[p] -= rate * velocity[p];
      }
    }

    const double mean_angle = epoch_loss / static_cast<double>(data.size());
    if (!std::isfinite(mean_angle)) {
      throw TrainingDivergedError(epoch);
    }
    result.curve.push_back(
        {epoch, rate, mean_angle, total_loss(0.0, 0.0, mean_angle, config.weights)});
  }
  return result;
}

}  // namespace psc
