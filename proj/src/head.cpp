#include "psc/head.hpp"

#include <stdexcept>

#include "psc/coder.hpp"
#include "psc/dual_coder.hpp"

namespace psc {

std::string_view to_string(Head head) {
  switch (head) {
    case Head::naive:
      return "naive";
    case Head::psc:
      return "psc";
    case Head::pscd:
      return "pscd";
  }
  return "unknown";
}

Head parse_head(std::string_view name) {
  if (name == "naive") return Head::naive;
  if (name == "psc") return Head::psc;
  if (name == "pscd") return Head::pscd;
  throw std::invalid_argument("unknown head '" + std::string(name) + "' (expected naive, psc or pscd)");
}

int output_dim(Head head, int n_step) {
  switch (head) {
    case Head::naive:
      return 1;
    case Head::psc:
      return n_step;
    case Head::pscd:
      return 2 * n_step;
  }
  throw std::invalid_argument("output_dim: bad head");
}

std::vector<double> head_target(Head head, Angle theta, int n_step) {
  switch (head) {
    case Head::naive:
      return {theta.radians};
    case Head::psc: {
      const auto code = encode(angle_to_phase(theta, SymmetryConfig::rectangle()), n_step);
      return {code.values().begin(), code.values().end()};
    }
    case Head::pscd:
      return encode_dual(theta, n_step).flatten();
  }
  throw std::invalid_argument("head_target: bad head");
}

}  // namespace psc
