#include "psc/angle.hpp"

#include <cmath>
#include <sstream>

namespace psc {

double wrap_phase(double raw, double period) {
  if (!std::isfinite(raw)) {
    throw std::invalid_argument("wrap_phase: non-finite input");
  }
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw std::invalid_argument("wrap_phase: period must be positive and finite");
  }
  const double half = period / 2.0;
  if (raw >= -half && raw < half) {
    return raw;
  }
  double wrapped = raw - period * std::floor((raw + half) / period);
  // floor() can land one ulp on the wrong side of either edge.
  if (wrapped >= half) {
    wrapped -= period;
  } else if (wrapped < -half) {
    wrapped += period;
  }
  return wrapped;
}

SymmetryConfig::SymmetryConfig(double period) : period_(period), multiplier_(kTwoPi / period) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw std::invalid_argument("SymmetryConfig: period must be positive and finite");
  }
}

Phase angle_to_phase(Angle theta, const SymmetryConfig& cfg) {
  if (!std::isfinite(theta.radians)) {
    throw std::invalid_argument("angle_to_phase: non-finite angle");
  }
  if (!cfg.contains(theta.radians)) {
    std::ostringstream msg;
    msg << "angle " << theta.radians << " outside [" << cfg.lower() << ", " << cfg.upper() << ")";
    throw RangeError(msg.str());
  }
  return Phase(cfg.multiplier() * theta.radians);
}

Angle phase_to_angle(Phase phi, const SymmetryConfig& cfg) {
  return Angle(phi.radians() / cfg.multiplier());
}

Phase scaled_phase(double theta, double multiplier) {
  return Phase(multiplier * theta);
}

double angular_distance(double a, double b, double period) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("angular_distance: non-finite angle");
  }
  return std::abs(wrap_phase(a - b, period));
}

}  // namespace psc
