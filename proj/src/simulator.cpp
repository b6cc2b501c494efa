#include "pes/simulator.hpp"

#include <cmath>
#include <string>

namespace pes {

namespace {

Vec rk4_step(const TimeVaryingField& field, double t, const Vec& x, double h) {
    const Vec k1 = field.eval(t, x);
    const Vec k2 = field.eval(t + 0.5 * h, x + 0.5 * h * k1);
    const Vec k3 = field.eval(t + 0.5 * h, x + 0.5 * h * k2);
    const Vec k4 = field.eval(t + h, x + h * k3);
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Trajectory integrate(const TimeVaryingField& field, const Vec& x0, double t0, double T,
                     double step) {
    require(step > 0.0, "integrate: step must be positive");
    require(T >= t0, "integrate: T must not precede t0");
    require(static_cast<int>(x0.size()) == field.dim, "integrate: x0 dimension mismatch");

    Trajectory traj;
    traj.step = step;
    const double span = T - t0;
    const auto full_steps = static_cast<std::size_t>(std::floor(span / step + 1e-12));
    traj.times.reserve(full_steps + 2);
    traj.states.reserve(full_steps + 2);
    traj.times.push_back(t0);
    traj.states.push_back(x0);

    Vec x = x0;
    for (std::size_t k = 1; k <= full_steps; ++k) {
        const double t_prev = t0 + static_cast<double>(k - 1) * step;
        x = rk4_step(field, t_prev, x, step);
        const double t = t0 + static_cast<double>(k) * step;
        if (!x.allFinite()) {
            throw BlowUpError("integrate: state blew up at t = " + std::to_string(t), t);
        }
        traj.times.push_back(t);
        traj.states.push_back(x);
    }
    const double t_last = traj.times.back();
    if (T - t_last > 1e-12 * std::max(1.0, std::abs(T))) {
        x = rk4_step(field, t_last, x, T - t_last);
        if (!x.allFinite()) {
            throw BlowUpError("integrate: state blew up at t = " + std::to_string(T), T);
        }
        traj.times.push_back(T);
        traj.states.push_back(x);
    }
    return traj;
}

Trajectory integrate_closed_loop(const InputAffineSystem& sys,
                                 const EsControllerParams& params, const ScalarField& cost,
                                 const Vec& x0, double T, int substeps_per_period,
                                 double t0) {
    require(substeps_per_period >= 32, "integrate_closed_loop: need at least 32 substeps");
    require(params.epsilon > 0.0, "integrate_closed_loop: epsilon must be positive");
    const TimeVaryingField field = closed_loop_field(sys, cost, params);
    const double step = params.epsilon / substeps_per_period;
    Trajectory traj = integrate(field, x0, t0, t0 + T, step);
    traj.epsilon = params.epsilon;
    traj.cost.reserve(traj.size());
    traj.controls.reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double j = cost.eval(traj.states[k]);
        traj.cost.push_back(j);
        traj.controls.push_back(es_control(traj.times[k], j, params));
    }
    return traj;
}

std::optional<DomainExit> domain_exit(const Trajectory& traj, const BoxDomain& domain) {
    const int n1 = static_cast<int>(domain.y_bounds.size());
    const int n2 = static_cast<int>(domain.z_bounds.size());
    for (const auto& [lo, hi] : domain.y_bounds) require(lo < hi, "domain_exit: lo >= hi");
    for (const auto& [lo, hi] : domain.z_bounds) require(lo < hi, "domain_exit: lo >= hi");
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const Vec& x = traj.states[k];
        require(static_cast<int>(x.size()) == n1 + n2, "domain_exit: box/state size mismatch");
        for (int i = 0; i < n1; ++i) {
            if (x[i] < domain.y_bounds[i].first || x[i] > domain.y_bounds[i].second) {
                return DomainExit{traj.times[k], i, true};
            }
        }
        for (int i = 0; i < n2; ++i) {
            if (x[n1 + i] < domain.z_bounds[i].first || x[n1 + i] > domain.z_bounds[i].second) {
                return DomainExit{traj.times[k], n1 + i, false};
            }
        }
    }
    return std::nullopt;
}

}  // namespace pes
