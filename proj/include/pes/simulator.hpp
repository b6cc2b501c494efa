#pragma once

#include "pes/controller.hpp"
#include "pes/system.hpp"
#include "pes/types.hpp"
#include "pes/vectorfield.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace pes {

/// Time-stamped state samples; controls and cost traces are filled by the
/// closed-loop integrator and empty otherwise.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<Vec> controls;
    std::vector<double> cost;
    double epsilon = 0.0;
    double step = 0.0;

    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] const Vec& back_state() const { return states.back(); }
};

/// Axis-aligned working domain, split into the y and z coordinate blocks.
/// Infinite bounds mark unconstrained coordinates.
struct BoxDomain {
    std::vector<std::pair<double, double>> y_bounds;
    std::vector<std::pair<double, double>> z_bounds;
};

struct DomainExit {
    double time = 0.0;
    int coordinate = 0;  // state index of the first violated bound
    bool in_y = false;
};

/// Classical fixed-step RK4 from t0 to T (final partial step allowed); every
/// accepted step is recorded. Throws BlowUpError when the state goes
/// non-finite.
Trajectory integrate(const TimeVaryingField& field, const Vec& x0, double t0, double T,
                     double step);

/// Closed-loop run with step eps/substeps_per_period so that sample indices
/// align with period boundaries exactly; records u(t) and J(x(t)).
Trajectory integrate_closed_loop(const InputAffineSystem& sys,
                                 const EsControllerParams& params, const ScalarField& cost,
                                 const Vec& x0, double T, int substeps_per_period = 64,
                                 double t0 = 0.0);

/// First sample outside the box, if any.
std::optional<DomainExit> domain_exit(const Trajectory& traj, const BoxDomain& domain);

}  // namespace pes
