#pragma once

#include "pes/stability.hpp"

#include <iosfwd>
#include <string>

namespace pes {

/// Structured text form of a stability report; parseable back so verdicts can
/// be re-checked from the stored runs alone.
void write_stability_report(std::ostream& out, const StabilityReport& report);
void write_stability_report(const std::string& path, const StabilityReport& report);

StabilityReport read_stability_report(std::istream& in);
StabilityReport read_stability_report(const std::string& path);

}  // namespace pes
