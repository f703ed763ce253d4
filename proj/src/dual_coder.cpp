#include "psc/dual_coder.hpp"

#include <cmath>

namespace psc {
namespace {

void check_rectangle_range(Angle theta) {
  if (!std::isfinite(theta.radians)) {
    throw std::invalid_argument("encode_dual: non-finite angle");
  }
  if (!SymmetryConfig::rectangle().contains(theta.radians)) {
    throw RangeError("encode_dual: angle outside [-pi/2, pi/2)");
  }
}

}  // namespace

DualPhaseCode::DualPhaseCode(PhaseCode low_code, PhaseCode high_code)
    : low(std::move(low_code)), high(std::move(high_code)) {
  if (low.n_step() != high.n_step()) {
    throw std::invalid_argument("dual code channels differ in length");
  }
}

std::vector<double> DualPhaseCode::flatten() const {
  std::vector<double> out(low.values().begin(), low.values().end());
  out.insert(out.end(), high.values().begin(), high.values().end());
  return out;
}

DualPhaseCode DualPhaseCode::from_flat(std::span<const double> values) {
  if (values.size() % 2 != 0) {
    throw std::invalid_argument("dual code must have even length");
  }
  const auto half = values.size() / 2;
  return {PhaseCode({values.begin(), values.begin() + static_cast<std::ptrdiff_t>(half)}),
          PhaseCode({values.begin() + static_cast<std::ptrdiff_t>(half), values.end()})};
}

std::string_view to_string(UnwrapBranch branch) {
  return branch == UnwrapBranch::shifted ? "shifted" : "direct";
}

UnwrapResult unwrap(Phase low, Phase high) {
  const double half_high = high.radians() / 2.0;
  UnwrapResult result;
  result.delta = std::cos(low.radians()) * std::cos(half_high) +
                 std::sin(low.radians()) * std::sin(half_high);
  if (result.delta < 0.0) {
    result.branch = UnwrapBranch::shifted;
    result.phi = Phase(kPi + half_high);
  } else {
    result.branch = UnwrapBranch::direct;
    result.phi = Phase(half_high);
  }
  return result;
}

DualPhaseCode DualCoder::encode(Angle theta) const {
  check_rectangle_range(theta);
  return {shifter_.encode(scaled_phase(theta.radians, kLowMultiplier)),
          shifter_.encode(scaled_phase(theta.radians, kHighMultiplier))};
}

void DualCoder::encode(Angle theta, std::span<double> out) const {
  check_rectangle_range(theta);
  const auto n = static_cast<std::size_t>(n_step());
  if (out.size() != 2 * n) {
    throw std::invalid_argument("encode_dual: output length must be 2*n_step");
  }
  shifter_.encode(scaled_phase(theta.radians, kLowMultiplier), out.first(n));
  shifter_.encode(scaled_phase(theta.radians, kHighMultiplier), out.last(n));
}

UnwrapResult DualCoder::decode(const DualPhaseCode& code) const {
  return unwrap(shifter_.decode(code.low.values()), shifter_.decode(code.high.values()));
}

UnwrapResult DualCoder::decode(std::span<const double> flat) const {
  const auto n = static_cast<std::size_t>(n_step());
  if (flat.size() != 2 * n) {
    throw std::invalid_argument("decode_dual: code length must be 2*n_step");
  }
  return unwrap(shifter_.decode(flat.first(n)), shifter_.decode(flat.last(n)));
}

bool DualCoder::try_decode(std::span<const double> flat, UnwrapResult& out) const noexcept {
  const auto n = static_cast<std::size_t>(n_step());
  if (flat.size() != 2 * n) {
    return false;
  }
  Phase low;
  Phase high;
  if (!shifter_.try_decode(flat.first(n), low) || !shifter_.try_decode(flat.last(n), high)) {
    return false;
  }
  out = unwrap(low, high);
  return true;
}

Angle DualCoder::decode_to_angle(const DualPhaseCode& code) const {
  return phase_to_angle(decode(code).phi, SymmetryConfig::rectangle());
}

DualPhaseCode encode_dual(Angle theta, int n_step) { return DualCoder(n_step).encode(theta); }

UnwrapResult decode_dual(const DualPhaseCode& code) { return DualCoder(code.n_step()).decode(code); }

Angle decode_dual_to_angle(const DualPhaseCode& code) {
  return DualCoder(code.n_step()).decode_to_angle(code);
}

}  // namespace psc
