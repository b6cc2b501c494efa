#include "pes/stability.hpp"

#include "pes/util.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace pes {

double ClassKEnvelope::value(double r) const {
    if (knots.empty()) return 0.0;
    if (r <= knots.front().first) return knots.front().second;
    for (std::size_t k = 1; k < knots.size(); ++k) {
        if (r <= knots[k].first) {
            const auto& [r0, v0] = knots[k - 1];
            const auto& [r1, v1] = knots[k];
            return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
        }
    }
    return knots.back().second;
}

bool ClassKEnvelope::valid() const {
    if (knots.size() < 2) return false;
    if (knots.front().first != 0.0 || knots.front().second != 0.0) return false;
    for (std::size_t k = 1; k < knots.size(); ++k) {
        if (knots[k].first <= knots[k - 1].first) return false;
        if (knots[k].second <= knots[k - 1].second) return false;
    }
    return true;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::stable: return "stable";
        case Verdict::attractive_only: return "attractive_only";
        case Verdict::failed: return "failed";
    }
    return "?";
}

std::optional<double> convergence_time(const Trajectory& traj, const Vec& y_star,
                                       double rho) {
    const int n1 = static_cast<int>(y_star.size());
    std::ptrdiff_t last_violation = -1;
    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(traj.size()) - 1; k >= 0; --k) {
        if ((traj.states[k].head(n1) - y_star).norm() > rho) {
            last_violation = k;
            break;
        }
    }
    if (last_violation < 0) return traj.times.front();
    if (last_violation + 1 >= static_cast<std::ptrdiff_t>(traj.size())) return std::nullopt;
    return traj.times[last_violation + 1];
}

namespace {

struct RunRecord {
    Vec x0;
    double t0 = 0.0;
    double eps = 0.0;
    bool blew_up = false;
    std::vector<double> times;
    std::vector<double> ydev;

    [[nodiscard]] double sup_after(double t) const {
        double sup = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (times[k] >= t) sup = std::max(sup, ydev[k]);
        }
        return sup;
    }

    [[nodiscard]] std::optional<double> settle_time(double rho) const {
        std::ptrdiff_t last = -1;
        for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(times.size()) - 1; k >= 0; --k) {
            if (ydev[k] > rho) {
                last = k;
                break;
            }
        }
        if (last < 0) return times.front();
        if (last + 1 >= static_cast<std::ptrdiff_t>(times.size())) return std::nullopt;
        return times[last + 1];
    }
};

RunRecord execute_run(const FlowFn& flow, const Vec& y_star, const Vec& x0, double t0,
                      double eps, double T) {
    RunRecord rec;
    rec.x0 = x0;
    rec.t0 = t0;
    rec.eps = eps;
    const int n1 = static_cast<int>(y_star.size());
    try {
        const Trajectory traj = flow(x0, t0, eps, T);
        rec.times = traj.times;
        rec.ydev.reserve(traj.size());
        for (const Vec& x : traj.states) rec.ydev.push_back((x.head(n1) - y_star).norm());
    } catch (const std::exception&) {
        rec.blew_up = true;
    }
    return rec;
}

std::vector<Vec> compose_starts(const std::vector<Vec>& y_starts,
                                std::span<const Vec> z0_grid) {
    std::vector<Vec> starts;
    if (z0_grid.empty()) return {y_starts.begin(), y_starts.end()};
    for (const Vec& y0 : y_starts) {
        for (const Vec& z0 : z0_grid) {
            Vec x0(y0.size() + z0.size());
            x0 << y0, z0;
            starts.push_back(std::move(x0));
        }
    }
    return starts;
}

}  // namespace

StabilityReport verify_practical_partial_stability(
    const FlowFn& flow, const Vec& y_star, double delta, std::span<const double> rho_list,
    std::span<const double> eps_list, std::span<const Vec> z0_grid,
    std::span<const double> t0_grid, double T, const VerifyOptions& opts) {
    require(!rho_list.empty(), "verify: empty rho list");
    require(!t0_grid.empty(), "verify: empty t0 grid");
    require(delta > 0.0 && T > 0.0, "verify: delta and T must be positive");

    StabilityReport report;
    report.delta = delta;
    report.y_dim = static_cast<int>(y_star.size());
    report.y_star = y_star;

    std::vector<double> eps_desc;
    const bool autonomous = opts.autonomous || eps_list.empty();
    if (autonomous) {
        eps_desc = {0.0};
    } else {
        eps_desc.assign(eps_list.begin(), eps_list.end());
        std::sort(eps_desc.begin(), eps_desc.end(), std::greater<>());
    }

    // attractivity trajectories are rho-independent: one batch per eps
    const std::vector<Vec> x0_attract =
        compose_starts(ball_samples(y_star, delta, opts.ball_samples), z0_grid);
    std::map<double, std::vector<RunRecord>> attract_runs;
    for (double eps : eps_desc) {
        std::vector<RunRecord> batch(x0_attract.size() * t0_grid.size());
        parallel_for(batch.size(), opts.workers, [&](std::size_t idx) {
            const Vec& x0 = x0_attract[idx % x0_attract.size()];
            const double t0 = t0_grid[idx / x0_attract.size()];
            batch[idx] = execute_run(flow, y_star, x0, t0, eps, T);
        });
        attract_runs[eps] = std::move(batch);
    }

    bool all_attained = true;
    bool all_bounded = true;
    for (double rho : rho_list) {
        require(rho > 0.0, "verify: rho must be positive");
        RhoResult res;
        res.rho = rho;

        // boundedness leg: start near y*, must never leave the rho ball
        const std::vector<Vec> x0_stay = compose_starts(
            ball_samples(y_star, opts.stay_fraction * rho, opts.ball_samples), z0_grid);

        std::vector<char> att_pass(eps_desc.size(), 0);
        std::vector<char> stay_pass(eps_desc.size(), 0);
        std::vector<double> t1_per_eps(eps_desc.size(), 0.0);
        std::map<double, std::vector<RunRecord>> stay_runs;
        for (std::size_t e = 0; e < eps_desc.size(); ++e) {
            const double eps = eps_desc[e];
            bool ok = true;
            double t1 = 0.0;
            for (const RunRecord& rec : attract_runs[eps]) {
                if (rec.blew_up) {
                    ok = false;
                    continue;
                }
                const auto tau = rec.settle_time(rho);
                if (!tau) {
                    ok = false;
                } else {
                    t1 = std::max(t1, *tau - rec.t0);
                }
            }
            att_pass[e] = ok ? 1 : 0;
            t1_per_eps[e] = t1;

            std::vector<RunRecord> batch(x0_stay.size() * t0_grid.size());
            parallel_for(batch.size(), opts.workers, [&](std::size_t idx) {
                const Vec& x0 = x0_stay[idx % x0_stay.size()];
                const double t0 = t0_grid[idx / x0_stay.size()];
                batch[idx] = execute_run(flow, y_star, x0, t0, eps, T);
            });
            bool stays = true;
            for (const RunRecord& rec : batch) {
                if (rec.blew_up || rec.sup_after(rec.t0) > rho) stays = false;
            }
            stay_pass[e] = stays ? 1 : 0;
            stay_runs[eps] = std::move(batch);
        }

        // largest eps whose whole suffix (all smaller listed eps) passes
        auto prefix_bar = [&](const std::vector<char>& pass) -> std::optional<std::size_t> {
            std::optional<std::size_t> found;
            for (std::size_t e = eps_desc.size(); e-- > 0;) {  // ascending in eps
                if (!pass[e]) break;
                found = e;
            }
            return found;
        };
        const auto att_bar = prefix_bar(att_pass);
        std::optional<std::size_t> both_bar;
        {
            std::vector<char> both(eps_desc.size());
            for (std::size_t e = 0; e < both.size(); ++e) both[e] = att_pass[e] && stay_pass[e];
            both_bar = prefix_bar(both);
        }

        res.attained = att_bar.has_value();
        res.bounded = both_bar.has_value();
        const auto chosen = res.bounded ? both_bar : att_bar;
        if (chosen) {
            res.epsilon_bar = eps_desc[*chosen];
            double t1 = 0.0;
            for (std::size_t e = *chosen; e < eps_desc.size(); ++e) {
                t1 = std::max(t1, t1_per_eps[e]);
            }
            res.t1 = t1;
        }

        // store the certifying runs (every listed eps at or below epsilon_bar);
        // when no eps certified, keep everything as failure evidence
        for (std::size_t e = 0; e < eps_desc.size(); ++e) {
            const double eps = eps_desc[e];
            const bool keep = autonomous || !chosen || e >= *chosen;
            if (!keep) continue;
            for (const RunRecord& rec : attract_runs[eps]) {
                StabilityRun run;
                run.x0 = rec.x0;
                run.eps = eps;
                run.t0 = rec.t0;
                run.sup_y_dev_after_t1 =
                    rec.blew_up ? std::numeric_limits<double>::infinity()
                                : rec.sup_after(rec.t0 + res.t1);
                run.converged = !rec.blew_up && rec.settle_time(rho).has_value() &&
                                run.sup_y_dev_after_t1 <= rho;
                res.runs.push_back(std::move(run));
            }
            for (const RunRecord& rec : stay_runs[eps]) {
                StabilityRun run;
                run.x0 = rec.x0;
                run.eps = eps;
                run.t0 = rec.t0;
                run.boundedness_run = true;
                run.sup_y_dev_after_t1 = rec.blew_up
                                             ? std::numeric_limits<double>::infinity()
                                             : rec.sup_after(rec.t0);
                run.converged = !rec.blew_up && run.sup_y_dev_after_t1 <= rho;
                res.runs.push_back(std::move(run));
            }
        }

        all_attained = all_attained && res.attained;
        all_bounded = all_bounded && res.bounded;
        report.results.push_back(std::move(res));
    }

    report.verdict = !all_attained ? Verdict::failed
                     : all_bounded ? Verdict::stable
                                   : Verdict::attractive_only;
    return report;
}

bool recheck_report(const StabilityReport& report) {
    bool any_attained = !report.results.empty();
    for (const auto& res : report.results) {
        for (const auto& run : res.runs) {
            if (run.converged && run.sup_y_dev_after_t1 > res.rho) return false;
        }
        if (res.attained) {
            // at least one converged attractivity run must back the claim
            bool backed = false;
            for (const auto& run : res.runs) {
                if (!run.boundedness_run && run.converged) backed = true;
            }
            if (!backed) return false;
        } else {
            any_attained = false;
        }
    }
    if (report.verdict == Verdict::stable || report.verdict == Verdict::attractive_only) {
        return any_attained;
    }
    return true;
}

namespace {

struct ShellStats {
    double r_mid = 0.0;
    double v_min = std::numeric_limits<double>::infinity();
    double v_max = -std::numeric_limits<double>::infinity();
    double lv_max = -std::numeric_limits<double>::infinity();
    int count = 0;
};

std::vector<ShellStats> shell_partition(std::span<const double> shells,
                                        std::span<const double> radius,
                                        std::span<const double> v_vals,
                                        std::span<const double> lv_vals) {
    std::vector<ShellStats> stats(shells.size());
    for (std::size_t k = 0; k < shells.size(); ++k) {
        const double lo = k == 0 ? 0.0 : shells[k - 1];
        stats[k].r_mid = 0.5 * (lo + shells[k]);
    }
    for (std::size_t i = 0; i < radius.size(); ++i) {
        double lo = 0.0;
        for (std::size_t k = 0; k < shells.size(); ++k) {
            if (radius[i] > lo && radius[i] <= shells[k]) {
                stats[k].v_min = std::min(stats[k].v_min, v_vals[i]);
                stats[k].v_max = std::max(stats[k].v_max, v_vals[i]);
                if (!lv_vals.empty()) stats[k].lv_max = std::max(stats[k].lv_max, lv_vals[i]);
                ++stats[k].count;
                break;
            }
            lo = shells[k];
        }
    }
    for (const auto& s : stats) {
        require(s.count > 0, "lyapunov_conditions: shell with no samples");
    }
    return stats;
}

ClassKEnvelope fit_envelope(const std::vector<double>& r_mid, std::span<const double> raw) {
    const std::vector<double> fit = isotonic_increasing(raw);
    ClassKEnvelope env;
    env.knots.emplace_back(0.0, 0.0);
    for (std::size_t k = 0; k < fit.size(); ++k) env.knots.emplace_back(r_mid[k], fit[k]);
    env.monotone = env.valid();
    return env;
}

bool strictly_increasing(std::span<const double> vals) {
    for (std::size_t k = 1; k < vals.size(); ++k) {
        if (!(vals[k] > vals[k - 1])) return false;
    }
    return true;
}

bool all_positive(std::span<const double> vals) {
    return std::all_of(vals.begin(), vals.end(), [](double v) { return v > 0.0; });
}

// increasing data that actually decays toward zero at small radii, i.e.
// admits a class-K majorant through (0, 0). Shell maxima that flatten at a
// positive level (a V term in the unconstrained coordinates) show a near-zero
// log-log slope; genuine class-K data grows at least like sqrt(r) here.
bool class_k_admissible(const std::vector<double>& r_mid, std::span<const double> vals) {
    if (!all_positive(vals)) return false;
    if (!strictly_increasing(vals)) return false;
    return log_log_slope(r_mid, vals) >= 0.5;
}

}  // namespace

LyapunovReport lyapunov_conditions(const ScalarField& v, const AveragedSystem& f_bar,
                                   const Vec& y_star, std::span<const Vec> sample_states,
                                   std::span<const double> shells,
                                   const std::optional<Vec>& x_star) {
    require(!shells.empty(), "lyapunov_conditions: empty shell list");
    require(!sample_states.empty(), "lyapunov_conditions: no samples");
    const int n1 = static_cast<int>(y_star.size());

    std::vector<double> r_y, v_vals, lv_vals, r_x;
    r_y.reserve(sample_states.size());
    for (const Vec& x : sample_states) {
        r_y.push_back((x.head(n1) - y_star).norm());
        v_vals.push_back(v.eval(x));
        lv_vals.push_back(gradient_at(v, x).dot(f_bar.field.eval(x)));
        if (x_star) r_x.push_back((x - *x_star).norm());
    }

    const auto stats = shell_partition(shells, r_y, v_vals, lv_vals);
    std::vector<double> r_mid, mins, maxs, neg_lv;
    for (const auto& s : stats) {
        r_mid.push_back(s.r_mid);
        mins.push_back(s.v_min);
        maxs.push_back(s.v_max);
        neg_lv.push_back(-s.lv_max);
    }

    LyapunovReport report;
    report.alpha1 = fit_envelope(r_mid, mins);
    report.alpha2 = fit_envelope(r_mid, maxs);
    report.alpha3 = fit_envelope(r_mid, neg_lv);

    const bool lower_ok = all_positive(mins) && strictly_increasing(mins);
    report.sandwich_ok = lower_ok && class_k_admissible(r_mid, maxs);
    report.decay_ok = class_k_admissible(r_mid, neg_lv);

    if (x_star) {
        const auto x_stats = shell_partition(shells, r_x, v_vals, {});
        std::vector<double> xr_mid, x_maxs;
        for (const auto& s : x_stats) {
            xr_mid.push_back(s.r_mid);
            x_maxs.push_back(s.v_max);
        }
        report.sandwich_x_ok = lower_ok && class_k_admissible(xr_mid, x_maxs);
        if (!report.sandwich_ok && report.sandwich_x_ok) {
            report.alpha2 = fit_envelope(xr_mid, x_maxs);
        }
    }
    return report;
}

std::pair<double, Vec> f_matrix_min_singular(std::span<const VectorField> tilde_fields,
                                             std::span<const Vec> grid) {
    require(!grid.empty(), "f_matrix_min_singular: empty grid");
    require(!tilde_fields.empty(), "f_matrix_min_singular: no fields");
    const int n1 = static_cast<int>(tilde_fields.size());
    for (const auto& f : tilde_fields) {
        require(f.dim_out == n1, "f_matrix_min_singular: fields must map to R^{n1}");
    }
    double min_sv = std::numeric_limits<double>::infinity();
    Vec argmin = grid.front();
    for (const Vec& x : grid) {
        Mat f_mat(n1, n1);
        for (int i = 0; i < n1; ++i) f_mat.col(i) = tilde_fields[i].eval(x);
        Eigen::JacobiSVD<Mat> svd(f_mat);
        const double sv = svd.singularValues().minCoeff();
        if (sv < min_sv) {
            min_sv = sv;
            argmin = x;
        }
    }
    return {min_sv, argmin};
}

}  // namespace pes
