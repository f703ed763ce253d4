#pragma once

#include <span>
#include <vector>

namespace psc {

/// Weights of the classification, box and angle loss terms.
struct LossWeights {
  double classification = 1.0;
  double box = 1.0;
  double angle = 0.2;

  /// Angle weight tied to the classification weight (w3 = 0.2 * w1).
  static LossWeights with_default_angle(double classification, double box) {
    return {classification, box, 0.2 * classification};
  }
};

/// y = 2 * sigmoid(x) - 1, elementwise. Output strictly inside (-1, 1).
double squash(double x);
std::vector<double> squash(std::span<const double> features);
void squash_inplace(std::span<double> values);

/// dy/dx = 2 * sigmoid(x) * (1 - sigmoid(x)).
double squash_grad(double x);
std::vector<double> squash_grad(std::span<const double> features);

struct LossWithGrad {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d pred
};

/// Mean absolute difference over the code. Subgradient is 0 where pred == gt.
LossWithGrad angle_loss(std::span<const double> pred, std::span<const double> gt);

/// Same as angle_loss but writes the gradient into `grad` without allocating.
double angle_loss(std::span<const double> pred, std::span<const double> gt, std::span<double> grad);

/// w1 * l_cls + w2 * l_box + w3 * l_ang.
double total_loss(double l_cls, double l_box, double l_ang, const LossWeights& weights);

}  // namespace psc
