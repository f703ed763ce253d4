#include "psc/regression_head.hpp"

#include <cmath>
#include <stdexcept>

namespace psc {
namespace {

double sigmoid(double x) {
  // Evaluate through exp(-|x|) so large magnitudes never overflow.
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double squash(double x) {
  // 2 * sigmoid(x) - 1 rewritten over exp(-|x|): exactly odd, and no
  // cancellation near zero.
  const double e = std::exp(-std::abs(x));
  const double magnitude = (1.0 - e) / (1.0 + e);
  return x < 0.0 ? -magnitude : magnitude;
}

std::vector<double> squash(std::span<const double> features) {
  std::vector<double> out(features.begin(), features.end());
  squash_inplace(out);
  return out;
}

void squash_inplace(std::span<double> values) {
  for (double& v : values) {
    v = squash(v);
  }
}

double squash_grad(double x) {
  const double s = sigmoid(x);
  return 2.0 * s * (1.0 - s);
}

std::vector<double> squash_grad(std::span<const double> features) {
  std::vector<double> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    out[i] = squash_grad(features[i]);
  }
  return out;
}

double angle_loss(std::span<const double> pred, std::span<const double> gt, std::span<double> grad) {
  if (pred.size() != gt.size() || grad.size() != pred.size()) {
    throw std::invalid_argument("angle_loss: length mismatch");
  }
  if (pred.empty()) {
    throw std::invalid_argument("angle_loss: empty code");
  }
  const double inv_len = 1.0 / static_cast<double>(pred.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = gt[i] - pred[i];
    sum += std::abs(diff);
    if (diff > 0.0) {
      grad[i] = -inv_len;
    } else if (diff < 0.0) {
      grad[i] = inv_len;
    } else {
      grad[i] = 0.0;
    }
  }
  return sum * inv_len;
}

LossWithGrad angle_loss(std::span<const double> pred, std::span<const double> gt) {
  LossWithGrad out;
  out.grad.resize(pred.size());
  out.loss = angle_loss(pred, gt, out.grad);
  return out;
}

double total_loss(double l_cls, double l_box, double l_ang, const LossWeights& weights) {
  if (weights.classification < 0.0 || weights.box < 0.0 || weights.angle < 0.0) {
    throw std::invalid_argument("total_loss: loss weights must be non-negative");
  }
  return weights.classification * l_cls + weights.box * l_box + weights.angle * l_ang;
}

}  // namespace psc
