#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "psc/angle.hpp"

namespace psc {

/// Corner offsets from the center, four (x, y) pairs.
inline constexpr int kFeatureDim = 8;

/// Long-edge convention: w >= h > 0, theta in [-pi/2, pi/2).
struct OrientedBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 1.0;
  double h = 1.0;
  double theta = 0.0;

  friend bool operator==(const OrientedBox&, const OrientedBox&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Corners in box order (+w+h, -w+h, -w-h, +w-h) for rotation `theta`. The
/// rotation is taken as given, so theta + pi is a legal argument.
std::array<Point, 4> box_corners(const OrientedBox& box, double theta);

/// Center-relative corner coordinates ordered by polar angle around the center
/// (ascending from -pi, ties by distance). The order does not depend on which
/// corner is labelled first, so equivalent boxes give equal features.
std::array<double, kFeatureDim> corner_features(const OrientedBox& box, double theta);
inline std::array<double, kFeatureDim> corner_features(const OrientedBox& box) {
  return corner_features(box, box.theta);
}

struct Sample {
  std::vector<double> features;
  Angle target_theta;
  OrientedBox box;
  bool is_square = false;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct DatasetConfig {
  int count = 1000;
  double square_fraction = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 42;
};

/// Aspect ratio range of non-square boxes.
inline constexpr double kMinAspect = 1.5;
inline constexpr double kMaxAspect = 4.0;

/// Deterministic for a given config. Throws std::invalid_argument for count <= 0,
/// a fraction outside [0, 1] or a negative/non-finite sigma.
std::vector<Sample> generate_dataset(const DatasetConfig& config);

}  // namespace psc
