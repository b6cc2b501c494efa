#include "pes/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pes {

double sigma_of(double m2, double m3, double w, int m, double epsilon) {
    const double md = static_cast<double>(m);
    return (m2 + w * w * md * md * m3 / 6.0) * (std::sqrt(epsilon) + w * md);
}

namespace {

// L_{f_j} f_i as a field value: (df_i/dx)(x) f_j(x)
Vec nested_lie(const InputAffineSystem& sys, int i, int j, const Vec& x) {
    const VectorField& fi = (i == 0) ? sys.drift : sys.inputs[i - 1];
    const VectorField& fj = (j == 0) ? sys.drift : sys.inputs[j - 1];
    return jacobian_at(fi, x).matrix * fj.eval(x);
}

// L_{f_l} L_{f_j} f_i via one finite-difference layer over the (analytic
// when available) first derivative map x -> (df_i/dx) f_j
Vec second_lie(const InputAffineSystem& sys, int i, int j, int l, const Vec& x) {
    const VectorField& fl = (l == 0) ? sys.drift : sys.inputs[l - 1];
    const Vec direction = fl.eval(x);
    const int n = sys.dim();
    Mat outer(n, n);
    Vec xp = x;
    Vec xm = x;
    for (int k = 0; k < n; ++k) {
        const double h = 1e-4 * std::max(1.0, std::abs(x[k]));
        xp[k] = x[k] + h;
        xm[k] = x[k] - h;
        outer.col(k) = (nested_lie(sys, i, j, xp) - nested_lie(sys, i, j, xm)) / (2.0 * h);
        xp[k] = x[k];
        xm[k] = x[k];
    }
    return outer * direction;
}

}  // namespace

BoundConstants bound_constants(const InputAffineSystem& sys, std::span<const Vec> grid,
                               double w_bound, double epsilon) {
    require(!grid.empty(), "bound_constants: empty grid");
    validate_system(sys);
    const int m = sys.num_inputs();
    BoundConstants c;
    c.W = w_bound;
    for (const Vec& x : grid) {
        const double n0 = sys.drift.eval(x).norm();
        if (!std::isfinite(n0)) throw NumericError("bound_constants: non-finite drift value");
        c.M0 = std::max(c.M0, n0);
        for (int i = 1; i <= m; ++i) c.M1 = std::max(c.M1, sys.inputs[i - 1].eval(x).norm());
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j) {
                c.M2 = std::max(c.M2, nested_lie(sys, i, j, x).norm());
            }
        }
        for (int i = 1; i <= m; ++i) {
            for (int j = 1; j <= m; ++j) {
                for (int l = 0; l <= m; ++l) {
                    c.M3 = std::max(c.M3, second_lie(sys, i, j, l, x).norm());
                }
            }
        }
    }
    if (!std::isfinite(c.M2) || !std::isfinite(c.M3)) {
        throw NumericError("bound_constants: non-finite derivative bound");
    }
    c.sigma = sigma_of(c.M2, c.M3, c.W, m, epsilon);
    return c;
}

namespace {

std::vector<Vec> lattice_box(const Vec& lo, const Vec& hi, int per_axis) {
    const int n = static_cast<int>(lo.size());
    std::vector<Vec> pts;
    std::vector<int> idx(n, 0);
    for (;;) {
        Vec p(n);
        for (int d = 0; d < n; ++d) {
            p[d] = per_axis == 1 ? 0.5 * (lo[d] + hi[d])
                                 : lo[d] + (hi[d] - lo[d]) * idx[d] / (per_axis - 1);
        }
        pts.push_back(std::move(p));
        int d = 0;
        while (d < n && ++idx[d] == per_axis) {
            idx[d] = 0;
            ++d;
        }
        if (d == n) break;
    }
    return pts;
}

}  // namespace

DefectResult one_period_defect(const InputAffineSystem& sys, const ScalarField& cost,
                               const EsControllerParams& params, const Vec& x0,
                               double epsilon) {
    require(epsilon > 0.0, "one_period_defect: epsilon must be positive");
    EsControllerParams p = params;
    p.epsilon = epsilon;

    const TimeVaryingField loop = closed_loop_field(sys, cost, p);
    const Trajectory traj = integrate(loop, x0, 0.0, epsilon, epsilon / 1024.0);

    const InputAffineSystem eff = effective_bracket_system(sys, cost, p);
    const NuMatrix nu = nu_matrix(p.dither);
    const AveragedSystem avg = lie_bracket_system(eff, nu);

    DefectResult res;
    res.defect = (traj.back_state() - x0 - epsilon * avg.field.eval(x0)).norm();

    // sup-norm grid: box around the observed one-period excursion, inflated
    const int n = sys.dim();
    Vec lo = x0;
    Vec hi = x0;
    for (const Vec& x : traj.states) {
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
    }
    for (int d = 0; d < n; ++d) {
        const double pad = 0.25 * (hi[d] - lo[d]) + 0.05;
        lo[d] -= pad;
        hi[d] += pad;
    }
    const std::vector<Vec> grid = lattice_box(lo, hi, 5);
    const double w = sup_bound(p.dither);
    res.constants = bound_constants(eff, grid, w, epsilon);
    res.bound = res.constants.sigma * std::pow(epsilon, 1.5);
    return res;
}

std::vector<bool> period_decay_check(const ScalarField& v, const Trajectory& traj,
                                     double epsilon, double rho_prime, double lambda,
                                     const Vec& y_star) {
    require(traj.step > 0.0, "period_decay_check: trajectory carries no step size");
    const auto stride = static_cast<std::size_t>(std::llround(epsilon / traj.step));
    require(stride >= 1 && std::abs(static_cast<double>(stride) * traj.step - epsilon) <
                               1e-9 * std::max(1.0, epsilon),
            "period_decay_check: samples do not align with period boundaries");
    require(traj.size() > stride, "period_decay_check: trajectory shorter than one period");

    const int n1 = static_cast<int>(y_star.size());
    std::vector<bool> out;
    for (std::size_t k = 0; (k + 1) * stride < traj.size(); ++k) {
        const Vec& x_k = traj.states[k * stride];
        if ((x_k.head(n1) - y_star).norm() < rho_prime) continue;
        const Vec& x_next = traj.states[(k + 1) * stride];
        out.push_back(v.eval(x_next) <= v.eval(x_k) - epsilon * lambda);
    }
    return out;
}

}  // namespace pes
