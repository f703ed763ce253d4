#pragma once

// Batch encode/decode over row-major code matrices. Every kernel exists twice:
// an OpenMP version and a plain serial loop kept as the reference the parallel
// one is tested (bitwise) and benchmarked against.

#include <cstddef>
#include <cstdint>
#include <span>

#include "psc/coder.hpp"
#include "psc/dual_coder.hpp"

namespace psc {

enum class Execution { serial, parallel };

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int parallel_threads();

namespace kernels {

/// codes[i*N .. i*N+N) = encode(wrap(phases[i])). Throws before any work on
/// non-finite input.
void encode_batch(std::span<const double> phases, const PhaseShifter& shifter,
                  std::span<double> codes, Execution exec = Execution::parallel);

/// phases[i] = decode(row i). Indeterminate rows get valid[i] = 0 and phase 0.
/// Returns the number of indeterminate rows.
std::size_t decode_batch(std::span<const double> codes, const PhaseShifter& shifter,
                         std::span<double> phases, std::span<std::uint8_t> valid,
                         Execution exec = Execution::parallel);

/// Rows of length 2*N; thetas must lie in [-pi/2, pi/2).
void encode_dual_batch(std::span<const double> thetas, const DualCoder& coder,
                       std::span<double> codes, Execution exec = Execution::parallel);

/// thetas[i] = decode_dual_to_angle(row i).
std::size_t decode_dual_batch(std::span<const double> codes, const DualCoder& coder,
                              std::span<double> thetas, std::span<std::uint8_t> valid,
                              Execution exec = Execution::parallel);

/// max_i angular_distance(a[i], b[i], period).
double max_angular_distance(std::span<const double> a, std::span<const double> b, double period,
                            Execution exec = Execution::parallel);

}  // namespace kernels
}  // namespace psc
