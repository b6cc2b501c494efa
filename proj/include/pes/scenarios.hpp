#pragma once

#include "pes/controller.hpp"
#include "pes/simulator.hpp"
#include "pes/system.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pes {

/// One cost attached to a scenario: the scalar field, which state coordinates
/// form y, the known minimizer, the reduced fields feeding the F-matrix test
/// (empty when the y-subsystem has drift), and a default working box.
struct CostSpec {
    std::string name;
    ScalarField j;
    std::vector<int> y_indices;
    Vec y_star;
    std::vector<VectorField> tilde_fields;
    BoxDomain domain;
};

struct RunPreset {
    std::string cost;
    GainKind kind = GainKind::contA;
    double epsilon = 0.0;
    Vec gamma_outer;
    Vec x0;
    double T = 0.0;
};

struct Scenario {
    std::string name;
    InputAffineSystem system;
    std::vector<CostSpec> costs;
    std::vector<std::pair<std::string, ScalarField>> reference_v;
    std::map<std::string, RunPreset> presets;
    VectorField builtin_averaged;  // closed-form averaged field, when one exists

    [[nodiscard]] const CostSpec& cost(const std::string& name) const;
};

/// Nonholonomic integrator with drift zero, f1 = (1, 0, x2), f2 = (0, 1, -x1);
/// costs J1 over (x1, x2) with minimizer (3, 1) and J2 over (x1, x3) with
/// minimizer (4, 0).
Scenario brockett_scenario();

/// Euler angular-velocity dynamics with torque inputs on the first two axes;
/// cost x1^2 + x2^2 (and the full-state variant), weighted reference Lyapunov
/// functions, and the closed-form averaged field for cross-checks.
Scenario rigid_body_scenario(double a1 = 1.0, double a2 = 2.0, double a3 = 3.0);

}  // namespace pes
