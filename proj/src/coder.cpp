#include "psc/coder.hpp"

#include <cmath>
#include <string>

namespace psc {
namespace {

void require_steps(int n_step) {
  if (n_step < kMinSteps) {
    throw std::invalid_argument("phase code needs at least 3 steps, got " + std::to_string(n_step));
  }
}

}  // namespace

PhaseCode::PhaseCode(std::vector<double> values) : values_(std::move(values)) {
  require_steps(n_step());
}

PhaseShifter::PhaseShifter(int n_step) {
  require_steps(n_step);
  const auto count = static_cast<std::size_t>(n_step);
  shifts_.resize(count);
  sin_.resize(count);
  cos_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    shifts_[i] = kTwoPi * static_cast<double>(i + 1) / static_cast<double>(n_step);
    sin_[i] = std::sin(shifts_[i]);
    cos_[i] = std::cos(shifts_[i]);
  }
}

void PhaseShifter::encode(Phase phi, std::span<double> out) const {
  if (out.size() != shifts_.size()) {
    throw std::invalid_argument("encode: output length does not match n_step");
  }
  for (std::size_t i = 0; i < shifts_.size(); ++i) {
    out[i] = std::cos(phi.radians() + shifts_[i]);
  }
}

PhaseCode PhaseShifter::encode(Phase phi) const {
  std::vector<double> values(shifts_.size());
  encode(phi, values);
  return PhaseCode(std::move(values));
}

bool PhaseShifter::try_decode(std::span<const double> code, Phase& out) const noexcept {
  if (code.size() != shifts_.size()) {
    return false;
  }
  double sin_sum = 0.0;
  double cos_sum = 0.0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    sin_sum += code[i] * sin_[i];
    cos_sum += code[i] * cos_[i];
  }
  if (!std::isfinite(sin_sum) || !std::isfinite(cos_sum)) {
    return false;
  }
  if (std::abs(sin_sum) < kIndeterminateThreshold && std::abs(cos_sum) < kIndeterminateThreshold) {
    return false;
  }
#ifdef PSC_FAULT_FLIP_DECODE_SIGN
  // Test hook: lets the verification suite prove it notices a broken decoder.
  out = Phase(std::atan2(sin_sum, cos_sum));
#else
  // atan2 lands in (-pi, pi]; the negation can produce +pi, which Phase folds to -pi.
  out = Phase(-std::atan2(sin_sum, cos_sum));
#endif
  return true;
}

Phase PhaseShifter::decode(std::span<const double> code) const {
  if (code.size() != shifts_.size()) {
    throw std::invalid_argument("decode: code length does not match n_step");
  }
  for (double v : code) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("decode: non-finite code value");
    }
  }
  Phase phi;
  if (!try_decode(code, phi)) {
    throw IndeterminatePhaseError();
  }
  return phi;
}

PhaseCode encode(Phase phi, int n_step) { return PhaseShifter(n_step).encode(phi); }

Phase decode(std::span<const double> code) {
  return PhaseShifter(static_cast<int>(code.size())).decode(code);
}

}  // namespace psc
