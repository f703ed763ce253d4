#include "psc/kernels.hpp"

#include <cmath>
#include <algorithm>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace psc {

int parallel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace kernels {
namespace {

using Index = std::ptrdiff_t;

void check_rows(std::size_t rows, std::size_t width, std::size_t flat, const char* what) {
  if (rows * width != flat) {
    throw std::invalid_argument(std::string(what) + ": buffer size does not match row count");
  }
}

void check_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + ": non-finite input");
    }
  }
}

}  // namespace

void encode_batch(std::span<const double> phases, const PhaseShifter& shifter,
                  std::span<double> codes, Execution exec) {
  const auto width = static_cast<std::size_t>(shifter.n_step());
  check_rows(phases.size(), width, codes.size(), "encode_batch");
  check_finite(phases, "encode_batch");
  const auto rows = static_cast<Index>(phases.size());
  if (exec == Execution::serial) {
    for (Index i = 0; i < rows; ++i) {
      shifter.encode(Phase(phases[i]), codes.subspan(static_cast<std::size_t>(i) * width, width));
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < rows; ++i) {
    shifter.encode(Phase(phases[i]), codes.subspan(static_cast<std::size_t>(i) * width, width));
  }
}

std::size_t decode_batch(std::span<const double> codes, const PhaseShifter& shifter,
                         std::span<double> phases, std::span<std::uint8_t> valid, Execution exec) {
  const auto width = static_cast<std::size_t>(shifter.n_step());
  check_rows(phases.size(), width, codes.size(), "decode_batch");
  if (valid.size() != phases.size()) {
    throw std::invalid_argument("decode_batch: validity buffer size mismatch");
  }
  const auto rows = static_cast<Index>(phases.size());
  auto decode_row = [&](Index i) -> std::size_t {
    const auto row = static_cast<std::size_t>(i);
    Phase phi;
    const bool ok = shifter.try_decode(codes.subspan(row * width, width), phi);
    phases[row] = ok ? phi.radians() : 0.0;
    valid[row] = ok ? 1 : 0;
    return ok ? 0 : 1;
  };
  std::size_t failures = 0;
  if (exec == Execution::serial) {
    for (Index i = 0; i < rows; ++i) {
      failures += decode_row(i);
    }
    return failures;
  }
#pragma omp parallel for schedule(static) reduction(+ : failures)
  for (Index i = 0; i < rows; ++i) {
    failures += decode_row(i);
  }
  return failures;
}

void encode_dual_batch(std::span<const double> thetas, const DualCoder& coder,
                       std::span<double> codes, Execution exec) {
  const auto width = 2 * static_cast<std::size_t>(coder.n_step());
  check_rows(thetas.size(), width, codes.size(), "encode_dual_batch");
  check_finite(thetas, "encode_dual_batch");
  for (double t : thetas) {
    if (!SymmetryConfig::rectangle().contains(t)) {
      throw RangeError("encode_dual_batch: angle outside [-pi/2, pi/2)");
    }
  }
  const auto rows = static_cast<Index>(thetas.size());
  if (exec == Execution::serial) {
    for (Index i = 0; i < rows; ++i) {
      coder.encode(Angle(thetas[i]), codes.subspan(static_cast<std::size_t>(i) * width, width));
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < rows; ++i) {
    coder.encode(Angle(thetas[i]), codes.subspan(static_cast<std::size_t>(i) * width, width));
  }
}

std::size_t decode_dual_batch(std::span<const double> codes, const DualCoder& coder,
                              std::span<double> thetas, std::span<std::uint8_t> valid,
                              Execution exec) {
  const auto width = 2 * static_cast<std::size_t>(coder.n_step());
  check_rows(thetas.size(), width, codes.size(), "decode_dual_batch");
  if (valid.size() != thetas.size()) {
    throw std::invalid_argument("decode_dual_batch: validity buffer size mismatch");
  }
  const auto rows = static_cast<Index>(thetas.size());
  auto decode_row = [&](Index i) -> std::size_t {
    const auto row = static_cast<std::size_t>(i);
    UnwrapResult result;
    const bool ok = coder.try_decode(codes.subspan(row * width, width), result);
    thetas[row] = ok ? result.phi.radians() / kLowMultiplier : 0.0;
    valid[row] = ok ? 1 : 0;
    return ok ? 0 : 1;
  };
  std::size_t failures = 0;
  if (exec == Execution::serial) {
    for (Index i = 0; i < rows; ++i) {
      failures += decode_row(i);
    }
    return failures;
  }
#pragma omp parallel for schedule(static) reduction(+ : failures)
  for (Index i = 0; i < rows; ++i) {
    failures += decode_row(i);
  }
  return failures;
}

double max_angular_distance(std::span<const double> a, std::span<const double> b, double period,
                            Execution exec) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("max_angular_distance: length mismatch");
  }
  check_finite(a, "max_angular_distance");
  check_finite(b, "max_angular_distance");
  if (!(period > 0.0)) {
    throw std::invalid_argument("max_angular_distance: period must be positive");
  }
  const auto rows = static_cast<Index>(a.size());
  double worst = 0.0;
  if (exec == Execution::serial) {
    for (Index i = 0; i < rows; ++i) {
      worst = std::max(worst, angular_distance(a[i], b[i], period));
    }
    return worst;
  }
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (Index i = 0; i < rows; ++i) {
    worst = std::max(worst, angular_distance(a[i], b[i], period));
  }
  return worst;
}

}  // namespace kernels
}  // namespace psc
