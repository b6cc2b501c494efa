#pragma once

#include "pes/simulator.hpp"
#include "pes/types.hpp"

#include <optional>
#include <string>

namespace pes {

/// Self-contained two-panel figure: (x1, x2) projection on top, x3(t) below
/// (or the sole remaining coordinate for lower-dimensional states). Marks the
/// start point and, when given, the target y*.
void write_trajectory_svg(const std::string& path, const Trajectory& traj,
                          const std::optional<Vec>& y_star, const std::string& title);

}  // namespace pes
