#include "psc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace psc {

std::array<Point, 4> box_corners(const OrientedBox& box, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double hw = box.w / 2.0;
  const double hh = box.h / 2.0;
  constexpr std::array<std::array<double, 2>, 4> signs{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  std::array<Point, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    const double lx = signs[i][0] * hw;
    const double ly = signs[i][1] * hh;
    out[i] = {box.cx + c * lx - s * ly, box.cy + s * lx + c * ly};
  }
  return out;
}

std::array<double, kFeatureDim> corner_features(const OrientedBox& box, double theta) {
  struct Polar {
    double angle;
    double radius;
    Point offset;
  };
  std::array<Polar, 4> polar{};
  const auto corners = box_corners(box, theta);
  for (std::size_t i = 0; i < 4; ++i) {
    const Point d{corners[i].x - box.cx, corners[i].y - box.cy};
    polar[i] = {std::atan2(d.y, d.x), std::hypot(d.x, d.y), d};
  }
  std::sort(polar.begin(), polar.end(), [](const Polar& a, const Polar& b) {
    if (a.angle != b.angle) {
      return a.angle < b.angle;
    }
    return a.radius < b.radius;
  });
  std::array<double, kFeatureDim> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    out[2 * i] = polar[i].offset.x;
    out[2 * i + 1] = polar[i].offset.y;
  }
  return out;
}

std::vector<Sample> generate_dataset(const DatasetConfig& config) {
  if (config.count <= 0) {
    throw std::invalid_argument("generate_dataset: count must be positive");
  }
  if (!(config.square_fraction >= 0.0 && config.square_fraction <= 1.0)) {
    throw std::invalid_argument("generate_dataset: square_fraction must lie in [0, 1]");
  }
  if (!(config.noise_sigma >= 0.0) || !std::isfinite(config.noise_sigma)) {
    throw std::invalid_argument("generate_dataset: noise_sigma must be finite and >= 0");
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-kPi / 2.0, kPi / 2.0);
  std::uniform_real_distribution<double> center(-50.0, 50.0);
  std::uniform_real_distribution<double> short_side(0.5, 1.0);
  std::uniform_real_distribution<double> aspect(kMinAspect, kMaxAspect);
  std::uniform_real_distribution<double> square_side(0.5, 2.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(config.count));
  for (int i = 0; i < config.count; ++i) {
    Sample sample;
    sample.is_square = unit(rng) < config.square_fraction;
    OrientedBox& box = sample.box;
    box.cx = center(rng);
    box.cy = center(rng);
    if (sample.is_square) {
      box.w = box.h = square_side(rng);
    } else {
      box.h = short_side(rng);
      box.w = aspect(rng) * box.h;
    }
    // uniform_real_distribution may return its upper bound after rounding.
    do {
      box.theta = angle(rng);
    } while (box.theta >= kPi / 2.0);
    sample.target_theta = Angle(box.theta);

    const auto features = corner_features(box);
    sample.features.assign(features.begin(), features.end());
    if (config.noise_sigma > 0.0) {
      for (double& f : sample.features) {
        f += config.noise_sigma * noise(rng);
      }
    }
    out.push_back(std::move(sample));
  }
  return out;
}

}  // namespace psc
