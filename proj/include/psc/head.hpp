#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "psc/angle.hpp"

namespace psc {

/// What the network regresses: theta itself, the single-frequency code of
/// 2*theta, or the dual-frequency code.
enum class Head { naive, psc, pscd };

std::string_view to_string(Head head);
Head parse_head(std::string_view name);

/// 1, N_step or 2*N_step.
int output_dim(Head head, int n_step);

/// Training target for a ground-truth angle in [-pi/2, pi/2).
std::vector<double> head_target(Head head, Angle theta, int n_step);

}  // namespace psc
