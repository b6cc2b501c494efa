#pragma once

#include "pes/averaging.hpp"
#include "pes/simulator.hpp"
#include "pes/system.hpp"

#include <span>
#include <vector>

namespace pes {

/// Sup-norm constants of the dithered system over a compact grid and the
/// remainder coefficient they imply:
///   sigma = (M2 + W^2 m^2 M3 / 6) (sqrt(eps) + W m).
struct BoundConstants {
    double M0 = 0.0;  // sup |f0|
    double M1 = 0.0;  // sup over i of |f_i|
    double M2 = 0.0;  // sup over i,j in {0..m} of |L_{f_j} f_i|
    double M3 = 0.0;  // sup over i,j in {1..m}, l in {0..m} of |L_{f_l} L_{f_j} f_i|
    double W = 0.0;
    double sigma = 0.0;
};

double sigma_of(double m2, double m3, double w, int m, double epsilon);

/// Evaluate M0..M3 over the grid (second derivatives by one finite-difference
/// layer over the analytic first derivatives when available) and assemble
/// sigma for the given eps.
BoundConstants bound_constants(const InputAffineSystem& sys, std::span<const Vec> grid,
                               double w_bound, double epsilon);

struct DefectResult {
    double defect = 0.0;  // |x(eps) - x0 - eps fbar(x0)|
    double bound = 0.0;   // sigma eps^{3/2}
    BoundConstants constants;
};

/// One dither period of the closed loop integrated with RK4 at step eps/1024,
/// compared against the one-step averaged prediction. The bound constants are
/// taken over a box around the observed excursion.
DefectResult one_period_defect(const InputAffineSystem& sys, const ScalarField& cost,
                               const EsControllerParams& params, const Vec& x0,
                               double epsilon);

/// For each period boundary k*eps with |y(k eps) - y_star| >= rho_prime,
/// whether V(x((k+1) eps)) <= V(x(k eps)) - eps*lambda. The trajectory must
/// be sampled so that period boundaries land on samples.
std::vector<bool> period_decay_check(const ScalarField& v, const Trajectory& traj,
                                     double epsilon, double rho_prime, double lambda,
                                     const Vec& y_star);

}  // namespace pes
