#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "psc/angle.hpp"

namespace psc {

inline constexpr int kMinSteps = 3;
inline constexpr int kDefaultSteps = 3;

/// Both least-squares sums fell below this magnitude.
inline constexpr double kIndeterminateThreshold = 1e-12;

class IndeterminatePhaseError : public std::runtime_error {
 public:
  IndeterminatePhaseError() : std::runtime_error("indeterminate phase") {}
};

/// N_step cosine samples of a phase, each shifted by a further 2*pi/N_step.
class PhaseCode {
 public:
  PhaseCode() = default;
  explicit PhaseCode(std::vector<double> values);

  [[nodiscard]] int n_step() const { return static_cast<int>(values_.size()); }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const PhaseCode&, const PhaseCode&) = default;

 private:
  std::vector<double> values_;
};

/// Precomputed shift table for one step count. Encoding and decoding through
/// the same table is allocation-free, which the batch kernels rely on.
class PhaseShifter {
 public:
  explicit PhaseShifter(int n_step = kDefaultSteps);

  [[nodiscard]] int n_step() const { return static_cast<int>(shifts_.size()); }

  /// out[n-1] = cos(phi + 2*n*pi/N) for n = 1..N.
  void encode(Phase phi, std::span<double> out) const;
  [[nodiscard]] PhaseCode encode(Phase phi) const;

  /// -atan2(sum x_n sin(2n pi/N), sum x_n cos(2n pi/N)), canonicalized to [-pi, pi).
  /// This is the least-squares phase of any N-vector, and the exact inverse of
  /// encode() on its image.
  [[nodiscard]] Phase decode(std::span<const double> code) const;

  /// Non-throwing variant. Returns false when the phase is indeterminate.
  [[nodiscard]] bool try_decode(std::span<const double> code, Phase& out) const noexcept;

 private:
  std::vector<double> shifts_;
  std::vector<double> sin_;
  std::vector<double> cos_;
};

PhaseCode encode(Phase phi, int n_step = kDefaultSteps);
Phase decode(std::span<const double> code);
inline Phase decode(const PhaseCode& code) { return decode(code.values()); }

}  // namespace psc
