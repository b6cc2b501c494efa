#pragma once

#include "pes/simulator.hpp"

#include <iosfwd>
#include <string>

namespace pes {

/// Columns `t, x1..xn, J, u1..um` (cost/control columns only when recorded),
/// 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

Trajectory read_trajectory_csv(std::istream& in);
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace pes
