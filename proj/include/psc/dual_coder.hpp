#pragma once

#include <span>
#include <string_view>

#include "psc/coder.hpp"

namespace psc {

/// Frequency multipliers of the two channels: phi1 = 2*theta, phi2 = 4*theta.
inline constexpr double kLowMultiplier = 2.0;
inline constexpr double kHighMultiplier = 4.0;

/// Codes for both frequencies; total length 2*N_step, low channel first.
struct DualPhaseCode {
  PhaseCode low;   // encodes 2*theta, selects the branch
  PhaseCode high;  // encodes 4*theta, carries the precision

  DualPhaseCode(PhaseCode low_code, PhaseCode high_code);

  [[nodiscard]] int n_step() const { return low.n_step(); }
  /// Concatenation {X1, X2}.
  [[nodiscard]] std::vector<double> flatten() const;
  static DualPhaseCode from_flat(std::span<const double> values);

  friend bool operator==(const DualPhaseCode&, const DualPhaseCode&) = default;
};

enum class UnwrapBranch { direct, shifted };

std::string_view to_string(UnwrapBranch branch);

struct UnwrapResult {
  Phase phi;
  double delta = 0.0;  // cos(phi1) cos(phi2/2) + sin(phi1) sin(phi2/2), not normalized
  UnwrapBranch branch = UnwrapBranch::direct;
};

/// Unwraps the high-frequency phase using the low-frequency one. A negative
/// inner product adds pi to phi2/2; exactly zero keeps the direct branch.
UnwrapResult unwrap(Phase low, Phase high);

class DualCoder {
 public:
  explicit DualCoder(int n_step = kDefaultSteps) : shifter_(n_step) {}

  [[nodiscard]] int n_step() const { return shifter_.n_step(); }

  /// theta must lie in [-pi/2, pi/2).
  [[nodiscard]] DualPhaseCode encode(Angle theta) const;
  void encode(Angle theta, std::span<double> out) const;

  [[nodiscard]] UnwrapResult decode(const DualPhaseCode& code) const;
  [[nodiscard]] UnwrapResult decode(std::span<const double> flat) const;
  [[nodiscard]] bool try_decode(std::span<const double> flat, UnwrapResult& out) const noexcept;

  [[nodiscard]] Angle decode_to_angle(const DualPhaseCode& code) const;

 private:
  PhaseShifter shifter_;
};

DualPhaseCode encode_dual(Angle theta, int n_step = kDefaultSteps);
UnwrapResult decode_dual(const DualPhaseCode& code);
Angle decode_dual_to_angle(const DualPhaseCode& code);

}  // namespace psc
