#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pes {

enum class PropertyScale { quick, full };

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct PropertySummary {
    std::uint64_t seed = 0;
    PropertyScale scale = PropertyScale::quick;
    std::vector<PropertyResult> results;

    [[nodiscard]] bool all_pass() const;
};

/// Execute every cross-module invariant (bracket antisymmetry, nu pattern,
/// Wronskian identity, averaged-field identities, defect bound, RK4 order,
/// stability verdicts, ...). Deterministic for a fixed seed; individual
/// failures are collected, never aborting the suite.
PropertySummary run_all(std::uint64_t seed, PropertyScale scale);

/// Human-readable pass/fail table.
void print_summary(std::ostream& out, const PropertySummary& summary);

/// Machine-readable copy (JSON).
void write_summary_json(const std::string& path, const PropertySummary& summary);

}  // namespace pes
