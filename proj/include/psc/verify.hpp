#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace psc {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::vector<int> n_steps{3, 4, 5, 8};
  int grid_points = 10000;
  std::uint64_t seed = 2024;
};

/// Runs every coder, dual coder, loss and regressor invariant. Each property
/// reports its worst observed deviation in `detail`.
std::vector<PropertyResult> run_verification(const VerifyOptions& options = {});

}  // namespace psc
