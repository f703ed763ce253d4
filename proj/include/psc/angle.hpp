#pragma once

#include <numbers>
#include <stdexcept>

namespace psc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when an angle falls outside the range its symmetry declares.
class RangeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Orientation angle in radians.
struct Angle {
  double radians = 0.0;

  constexpr Angle() = default;
  constexpr explicit Angle(double r) : radians(r) {}
  friend constexpr bool operator==(Angle, Angle) = default;
};

/// Reduces `raw` to the representative congruent modulo `period` that lies in
/// [-period/2, period/2). Throws std::invalid_argument for non-finite input or a
/// non-positive period.
double wrap_phase(double raw, double period);

/// Principal phase. Construction wraps to [-pi, pi).
class Phase {
 public:
  constexpr Phase() = default;
  explicit Phase(double raw) : value_(wrap_phase(raw, kTwoPi)) {}

  [[nodiscard]] constexpr double radians() const { return value_; }
  friend constexpr bool operator==(Phase, Phase) = default;

 private:
  double value_ = 0.0;
};

/// Rotational symmetry of an object class. An object that looks the same after
/// a rotation of `period()` radians maps onto a full phase cycle with frequency
/// multiplier 2*pi / period.
class SymmetryConfig {
 public:
  /// Rectangle (long-edge-90) convention: period pi, multiplier 2.
  constexpr SymmetryConfig() = default;
  explicit SymmetryConfig(double period);

  static SymmetryConfig rectangle() { return SymmetryConfig(kPi); }
  static SymmetryConfig square() { return SymmetryConfig(kPi / 2.0); }
  static SymmetryConfig heading() { return SymmetryConfig(kTwoPi); }

  [[nodiscard]] constexpr double period() const { return period_; }
  [[nodiscard]] constexpr double multiplier() const { return multiplier_; }
  [[nodiscard]] constexpr double lower() const { return -period_ / 2.0; }
  [[nodiscard]] constexpr double upper() const { return period_ / 2.0; }
  [[nodiscard]] constexpr bool contains(double theta) const {
    return theta >= lower() && theta < upper();
  }

 private:
  double period_ = kPi;
  double multiplier_ = 2.0;
};

/// phi = wrap(k * theta). Rejects theta outside [-s/2, s/2) with RangeError.
Phase angle_to_phase(Angle theta, const SymmetryConfig& cfg = {});

/// theta = phi / k.
Angle phase_to_angle(Phase phi, const SymmetryConfig& cfg = {});

/// wrap(multiplier * theta) without any range contract on theta. Used for the
/// higher-frequency channel of the dual coder, where 4*theta spans two cycles.
Phase scaled_phase(double theta, double multiplier);

/// Geodesic distance on a circle of circumference `period`; result in
/// [0, period/2]. Accepts any finite inputs.
double angular_distance(double a, double b, double period);

inline double angular_distance(Angle a, Angle b, const SymmetryConfig& cfg = {}) {
  return angular_distance(a.radians, b.radians, cfg.period());
}

inline constexpr double to_degrees(double radians) { return radians * 180.0 / kPi; }
inline constexpr double to_radians(double degrees) { return degrees * kPi / 180.0; }

}  // namespace psc
