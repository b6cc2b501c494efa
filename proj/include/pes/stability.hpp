#pragma once

#include "pes/averaging.hpp"
#include "pes/simulator.hpp"
#include "pes/system.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pes {

/// Piecewise-linear class-K envelope: strictly increasing knots anchored at
/// (0, 0).
struct ClassKEnvelope {
    std::vector<std::pair<double, double>> knots;  // (r, value), r increasing
    bool monotone = false;

    [[nodiscard]] double value(double r) const;
    [[nodiscard]] bool valid() const;
};

struct StabilityRun {
    Vec x0;
    double eps = 0.0;
    double t0 = 0.0;
    double sup_y_dev_after_t1 = 0.0;
    bool converged = false;
    bool boundedness_run = false;  // started near y*, checked for staying in rho
};

struct RhoResult {
    double rho = 0.0;
    double epsilon_bar = 0.0;  // 0 when no listed eps worked or system is autonomous
    double t1 = 0.0;
    bool attained = false;        // attractivity holds up to epsilon_bar
    bool bounded = false;         // runs from the small ball stayed inside rho
    std::vector<StabilityRun> runs;
};

enum class Verdict { stable, attractive_only, failed };

std::string to_string(Verdict v);

struct StabilityReport {
    double delta = 0.0;
    int y_dim = 0;
    Vec y_star;
    Verdict verdict = Verdict::failed;
    std::vector<RhoResult> results;
};

/// A system under test: produces the trajectory from (x0, t0) over [t0, t0+T]
/// at dither period eps (ignored by autonomous systems).
using FlowFn = std::function<Trajectory(const Vec& x0, double t0, double eps, double T)>;

struct VerifyOptions {
    int ball_samples = 16;     // delta-ball sample count (boundary + Halton interior)
    double stay_fraction = 0.4;  // boundedness runs start at stay_fraction * rho
    int workers = 1;
    bool autonomous = false;   // eps-free system: eps_list collapses to one run
};

/// Empirical practical partial y-stability sweep: for each rho, searches
/// eps_list descending for the largest eps_bar such that every run from the
/// delta-ball x z0_grid x t0_grid converges into the rho-ball and stays there
/// through the horizon, and runs started near y* never leave the rho-ball.
/// Blow-ups are recorded as failed runs.
StabilityReport verify_practical_partial_stability(
    const FlowFn& flow, const Vec& y_star, double delta, std::span<const double> rho_list,
    std::span<const double> eps_list, std::span<const Vec> z0_grid,
    std::span<const double> t0_grid, double T, const VerifyOptions& opts = {});

/// Smallest sample time tau with |y(t) - y_star| <= rho for every recorded
/// t >= tau; nullopt when the trajectory never settles inside the ball.
std::optional<double> convergence_time(const Trajectory& traj, const Vec& y_star,
                                       double rho);

/// Re-validate a report from its stored runs alone.
bool recheck_report(const StabilityReport& report);

struct LyapunovReport {
    ClassKEnvelope alpha1;  // lower bound on V over y-shells
    ClassKEnvelope alpha2;  // upper bound on V (y-shells, or x-shells for the relaxed variant)
    ClassKEnvelope alpha3;  // decay envelope: L_fbar V <= -alpha3(r)
    bool sandwich_ok = false;            // alpha1 <= V <= alpha2(|y - y*|)
    bool sandwich_x_ok = false;  // upper bound taken over |x - x*| shells
    bool decay_ok = false;            // L_fbar V <= -alpha3(|y - y*|)
};

/// Shell-statistics check of the two Lyapunov conditions. Samples are grouped
/// into shells by |y - y*| (and by |x - x*| for the relaxed variant when
/// x_star is given); envelopes are isotonic fits of the per-shell extremes.
LyapunovReport lyapunov_conditions(const ScalarField& v, const AveragedSystem& f_bar,
                                   const Vec& y_star, std::span<const Vec> sample_states,
                                   std::span<const double> shells,
                                   const std::optional<Vec>& x_star = std::nullopt);

/// Minimum singular value of the n1 x n1 matrix F(x) whose columns are the
/// tilde fields, over the grid; returns the minimizing state as well.
std::pair<double, Vec> f_matrix_min_singular(std::span<const VectorField> tilde_fields,
                                             std::span<const Vec> grid);

}  // namespace pes
