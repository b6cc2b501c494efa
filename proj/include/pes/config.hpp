#pragma once

#include "pes/types.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pes {

/// Config file problem with the offending line for diagnostics.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit ConfigError(const std::string& what) : std::runtime_error(what), line_(0) {}
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

/// [run] section: scenario, cost, gains and integration parameters.
struct RunConfig {
    std::string scenario;
    std::string cost;
    std::string gain_kind = "contA";
    double epsilon = 0.25;
    std::vector<double> gammas;
    Vec x0;
    double T = 10.0;
    int substeps = 64;
    long seed = 1;
    std::string output_dir = ".";
    std::vector<double> inertia;  // rigid body only; empty keeps (1, 2, 3)
};

/// [stability] section driving the Definition-1 verifier.
struct StabilityConfig {
    double delta = 1.0;
    std::vector<double> rho;
    std::vector<double> eps;
    std::vector<Vec> z0;          // semicolon-separated vectors in the file
    std::vector<double> t0{0.0};
    double T = 30.0;
    int samples = 16;
    bool averaged = false;        // verify the Lie bracket system instead of the loop
};

/// [check] section: grids for the identity and bound checks.
struct CheckConfig {
    Vec grid_lo;
    Vec grid_hi;
    int grid_points = 50;
    std::vector<double> defect_eps{0.4, 0.2, 0.1, 0.05};
    Vec defect_x0;  // empty falls back to run.x0
};

/// [sweep] section: epsilon and initial-condition grids.
struct SweepConfig {
    std::vector<double> eps;
    std::vector<Vec> x0_list;
    double T = 0.0;  // 0 falls back to run.T
};

struct Config {
    RunConfig run;
    std::optional<StabilityConfig> stability;
    std::optional<CheckConfig> check;
    std::optional<SweepConfig> sweep;
};

Config parse_config(std::istream& in);
Config parse_config_file(const std::string& path);

}  // namespace pes
