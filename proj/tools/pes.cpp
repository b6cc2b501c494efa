#include "pes/averaging.hpp"
#include "pes/config.hpp"
#include "pes/controller.hpp"
#include "pes/csv.hpp"
#include "pes/report_io.hpp"
#include "pes/scenarios.hpp"
#include "pes/simulator.hpp"
#include "pes/stability.hpp"
#include "pes/svg.hpp"
#include "pes/util.hpp"
#include "pes/volterra.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace pes;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int workers = 0;
    int substeps = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "run configuration file")->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--workers", opts.workers, "worker threads (or PES_WORKERS)");
    cmd->add_option("--substeps", opts.substeps, "substeps per dither period");
}

struct LoadedRun {
    Config config;
    std::optional<Scenario> scenario;  // empty for the cli-only 'unstable' demo
    const CostSpec* cost = nullptr;
    GainKind kind = GainKind::contA;
    Vec gamma_outer;
    fs::path out;
    int workers = 1;
};

LoadedRun load(const CommonOpts& opts, bool need_controller) {
    LoadedRun run;
    run.config = parse_config_file(opts.config_path);
    RunConfig& rc = run.config.run;
    if (opts.substeps > 0) rc.substeps = opts.substeps;
    run.workers = resolve_workers(opts.workers);
    run.out = opts.out_dir.empty() ? fs::path(rc.output_dir) : fs::path(opts.out_dir);

    if (rc.scenario == "brockett") {
        run.scenario = brockett_scenario();
    } else if (rc.scenario == "rigid_body") {
        if (rc.inertia.empty()) {
            run.scenario = rigid_body_scenario();
        } else if (rc.inertia.size() == 3) {
            run.scenario = rigid_body_scenario(rc.inertia[0], rc.inertia[1], rc.inertia[2]);
        } else {
            throw ConfigError("inertia needs exactly three entries");
        }
    } else if (rc.scenario == "unstable") {
        run.scenario.reset();  // scalar growth demo, verify only
    } else {
        throw ConfigError("unknown scenario '" + rc.scenario + "'");
    }

    if (run.scenario) {
        const std::string cost_name =
            rc.cost.empty() ? run.scenario->costs.front().name : rc.cost;
        run.cost = &run.scenario->cost(cost_name);
        run.kind = gain_kind_from_string(rc.gain_kind);
        const int m = run.scenario->system.num_inputs();
        if (rc.gammas.empty()) {
            run.gamma_outer = Vec::Constant(m, 2.0);
        } else if (static_cast<int>(rc.gammas.size()) == m) {
            run.gamma_outer = Eigen::Map<const Vec>(rc.gammas.data(), m);
        } else {
            throw ConfigError("gammas needs one entry per input channel");
        }
        if (rc.x0.size() == 0) {
            throw ConfigError("[run] x0 is required for this scenario");
        }
        if (rc.x0.size() != run.scenario->system.dim()) {
            throw ConfigError("x0 has wrong dimension for scenario '" + rc.scenario + "'");
        }
    } else if (need_controller) {
        throw ConfigError("scenario 'unstable' supports only the verify command");
    }
    return run;
}

EsControllerParams controller_for(const LoadedRun& run, double epsilon) {
    return make_es_params(run.kind, run.scenario->system.num_inputs(), epsilon,
                          run.gamma_outer);
}

Vec y_of(const CostSpec& cost, const Vec& x) {
    Vec y(static_cast<long>(cost.y_indices.size()));
    for (std::size_t i = 0; i < cost.y_indices.size(); ++i) y[i] = x[cost.y_indices[i]];
    return y;
}

int cmd_simulate(const CommonOpts& opts) {
    const LoadedRun run = load(opts, true);
    const RunConfig& rc = run.config.run;
    const auto params = controller_for(run, rc.epsilon);
    const Trajectory traj = integrate_closed_loop(run.scenario->system, params, run.cost->j,
                                                  rc.x0, rc.T, rc.substeps);

    fs::create_directories(run.out);
    const fs::path csv_path = run.out / "trajectory.csv";
    const fs::path svg_path = run.out / "trajectory.svg";
    write_trajectory_csv(csv_path.string(), traj);
    std::ostringstream title;
    title << rc.scenario << " / " << run.cost->name << " / " << to_string(run.kind)
          << "  eps=" << rc.epsilon;
    write_trajectory_svg(svg_path.string(), traj, run.cost->y_star, title.str());

    const double final_dist = (y_of(*run.cost, traj.back_state()) - run.cost->y_star).norm();
    const Vec geff = effective_gammas(params);
    std::cout << "wrote " << csv_path.string() << " and " << svg_path.string() << "\n";
    std::cout << "effective gains:";
    for (int i = 0; i < geff.size(); ++i) std::cout << ' ' << geff[i];
    std::cout << "\nfinal |y - y*| = " << final_dist << "\n";

    if (const auto exit = domain_exit(traj, run.cost->domain)) {
        std::cout << "note: trajectory left the working domain at t = " << exit->time
                  << " (coordinate " << exit->coordinate + 1 << ", "
                  << (exit->in_y ? "y" : "z") << " block)\n";
    }
    return kExitOk;
}

int cmd_verify(const CommonOpts& opts) {
    const LoadedRun run = load(opts, false);
    if (!run.config.stability) throw ConfigError("verify needs a [stability] section");
    const StabilityConfig& st = *run.config.stability;
    if (st.rho.empty()) throw ConfigError("[stability] rho list must not be empty");
    if (st.delta <= 0.0) throw ConfigError("[stability] delta must be positive");

    FlowFn flow;
    Vec y_star;
    VerifyOptions vopts;
    vopts.ball_samples = st.samples;
    vopts.workers = run.workers;

    if (!run.scenario) {
        // scalar growth with no control: the contrived failing case
        flow = [](const Vec& x0, double t0, double, double T) {
            const TimeVaryingField growth{1, [](double, const Vec& x) { return x; }};
            return integrate(growth, x0, t0, t0 + T, 0.01);
        };
        y_star = Vec::Zero(1);
        vopts.autonomous = true;
    } else if (st.averaged) {
        const InputAffineSystem sys = run.scenario->system;
        const ScalarField cost = run.cost->j;
        const auto params = controller_for(run, run.config.run.epsilon);
        const AveragedSystem avg = es_averaged_field(sys, cost, effective_gammas(params));
        const VectorField field = avg.field;
        flow = [field](const Vec& x0, double t0, double, double T) {
            return integrate(autonomous(field), x0, t0, t0 + T, 0.01);
        };
        y_star = run.cost->y_star;
        vopts.autonomous = true;
    } else {
        if (st.eps.empty()) throw ConfigError("[stability] eps list must not be empty");
        const InputAffineSystem sys = run.scenario->system;
        const ScalarField cost = run.cost->j;
        const int substeps = run.config.run.substeps;
        const GainKind kind = run.kind;
        const Vec gamma_outer = run.gamma_outer;
        flow = [sys, cost, substeps, kind, gamma_outer](const Vec& x0, double t0, double eps,
                                                        double T) {
            const auto params = make_es_params(kind, sys.num_inputs(), eps, gamma_outer);
            return integrate_closed_loop(sys, params, cost, x0, T, substeps, t0);
        };
        y_star = run.cost->y_star;
    }

    const StabilityReport report = verify_practical_partial_stability(
        flow, y_star, st.delta, st.rho, st.eps, st.z0, st.t0, st.T, vopts);

    fs::create_directories(run.out);
    const fs::path path = run.out / "stability_report.txt";
    write_stability_report(path.string(), report);
    std::cout << "verdict: " << to_string(report.verdict) << "\n";
    for (const auto& res : report.results) {
        std::cout << "  rho " << res.rho << ": attained=" << (res.attained ? "yes" : "no")
                  << " epsilon_bar=" << res.epsilon_bar << " t1=" << res.t1 << "\n";
    }
    std::cout << "wrote " << path.string() << "\n";
    return report.verdict == Verdict::failed ? kExitCheckFailed : kExitOk;
}

std::vector<Vec> check_grid(const LoadedRun& run, int count) {
    const CheckConfig defaults;
    const CheckConfig& ck = run.config.check ? *run.config.check : defaults;
    const int n = run.scenario->system.dim();
    Vec lo(n);
    Vec hi(n);
    if (ck.grid_lo.size() == n && ck.grid_hi.size() == n) {
        lo = ck.grid_lo;
        hi = ck.grid_hi;
    } else {
        // scenario fallback window, clipped into the cost's working domain
        const double span_lo = run.config.run.scenario == "brockett" ? 0.0 : -2.0;
        const double span_hi = run.config.run.scenario == "brockett" ? 5.0 : 2.0;
        lo.setConstant(span_lo);
        hi.setConstant(span_hi);
        const auto& dom = run.cost->domain;
        for (int d = 0; d < n; ++d) {
            const auto& [blo, bhi] =
                d < static_cast<int>(dom.y_bounds.size())
                    ? dom.y_bounds[d]
                    : dom.z_bounds[d - static_cast<int>(dom.y_bounds.size())];
            lo[d] = std::max(lo[d], blo);
            hi[d] = std::min(hi[d], bhi);
        }
    }
    // box corners first so boundary degeneracies are always sampled
    std::vector<Vec> grid;
    const int corners = 1 << n;
    for (int c = 0; c < corners && static_cast<int>(grid.size()) < count; ++c) {
        Vec p(n);
        for (int d = 0; d < n; ++d) p[d] = (c >> d) & 1 ? hi[d] : lo[d];
        grid.push_back(std::move(p));
    }
    for (Vec& p : halton_points(static_cast<std::size_t>(count) - grid.size(), n)) {
        for (int d = 0; d < n; ++d) p[d] = lo[d] + (hi[d] - lo[d]) * p[d];
        grid.push_back(std::move(p));
    }
    return grid;
}

int cmd_check(const CommonOpts& opts) {
    const LoadedRun run = load(opts, true);
    const RunConfig& rc = run.config.run;
    const CheckConfig defaults;
    const CheckConfig& ck = run.config.check ? *run.config.check : defaults;

    struct Row {
        std::string name;
        bool pass;
        std::string detail;
    };
    std::vector<Row> rows;

    const auto params = controller_for(run, rc.epsilon);

    {  // gain-pair relation
        const GainPair pair = make_gain_pair(run.kind);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const double z = run.kind == GainKind::contB ? 0.05 + 0.1 * k
                                                         : -9.0 + 0.18 * k;
            worst = std::max(worst, std::abs(wronskian_residual(pair, z)));
        }
        std::ostringstream d;
        d << "max |residual| = " << worst << " (tol 1e-5)";
        rows.push_back({"wronskian", worst <= 1e-5, d.str()});
    }
    {  // dither pairing
        const NuMatrix nu = nu_matrix(params.dither);
        const bool ok = nu_pattern_ok(nu, params.channels(), 1e-8);
        rows.push_back({"nu_pattern", ok, ok ? "paired entries only" : "pattern violated"});
    }
    {  // averaged equivalence
        const auto grid = check_grid(run, ck.grid_points);
        const double res =
            averaged_equivalence_residual(run.scenario->system, run.cost->j, params, grid);
        std::ostringstream d;
        d << "sup residual = " << res << " (tol 1e-5)";
        rows.push_back({"averaged_equivalence", res <= 1e-5, d.str()});
    }
    if (!run.cost->tilde_fields.empty()) {  // reduced-field independence
        const auto grid = check_grid(run, ck.grid_points);
        const auto [sv, argmin] = f_matrix_min_singular(run.cost->tilde_fields, grid);
        std::ostringstream d;
        d << "min singular value = " << sv << " at x1 = " << argmin[0];
        rows.push_back({"f_matrix", sv > 1e-9, d.str()});
    } else {
        rows.push_back({"f_matrix", true, "skipped: y-subsystem has drift"});
    }
    {  // one-period remainder bound
        const Vec x0 = ck.defect_x0.size() == run.scenario->system.dim() ? ck.defect_x0
                                                                         : rc.x0;
        bool ok = true;
        std::ostringstream d;
        for (double eps : ck.defect_eps) {
            const auto res =
                one_period_defect(run.scenario->system, run.cost->j, params, x0, eps);
            if (res.defect > res.bound) ok = false;
            d << "eps=" << eps << ": " << res.defect << " <= " << res.bound << "  ";
        }
        rows.push_back({"defect_bound", ok, d.str()});
    }

    fs::create_directories(run.out);
    const fs::path path = run.out / "check_report.txt";
    std::ofstream file(path);
    bool all_ok = true;
    for (const auto& row : rows) {
        const std::string line =
            std::string(row.pass ? "PASS" : "FAIL") + "  " + row.name + ": " + row.detail;
        std::cout << line << "\n";
        file << line << "\n";
        all_ok = all_ok && row.pass;
    }
    std::cout << "wrote " << path.string() << "\n";
    return all_ok ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const CommonOpts& opts) {
    const LoadedRun run = load(opts, true);
    const RunConfig& rc = run.config.run;
    if (!run.config.sweep) throw ConfigError("sweep needs a [sweep] section");
    const SweepConfig& sw = *run.config.sweep;
    if (sw.eps.empty()) throw ConfigError("[sweep] eps list must not be empty");
    const std::vector<Vec> x0_list = sw.x0_list.empty() ? std::vector<Vec>{rc.x0} : sw.x0_list;
    for (const Vec& x0 : x0_list) {
        if (x0.size() != run.scenario->system.dim()) {
            throw ConfigError("[sweep] x0 entry has wrong dimension");
        }
    }
    const double T = sw.T > 0.0 ? sw.T : rc.T;

    struct Cell {
        double eps = 0.0;
        Vec x0;
        double final_dist = 0.0;
        double tail_sup = 0.0;
        bool blew_up = false;
    };
    std::vector<Cell> cells(sw.eps.size() * x0_list.size());
    const InputAffineSystem sys = run.scenario->system;
    const CostSpec& cost = *run.cost;
    parallel_for(cells.size(), run.workers, [&](std::size_t idx) {
        Cell& cell = cells[idx];
        cell.eps = sw.eps[idx / x0_list.size()];
        cell.x0 = x0_list[idx % x0_list.size()];
        try {
            const auto params = controller_for(run, cell.eps);
            const Trajectory traj =
                integrate_closed_loop(sys, params, cost.j, cell.x0, T, rc.substeps);
            cell.final_dist = (y_of(cost, traj.back_state()) - cost.y_star).norm();
            const double tail_start = traj.times.front() + 0.8 * T;
            for (std::size_t k = 0; k < traj.size(); ++k) {
                if (traj.times[k] >= tail_start) {
                    cell.tail_sup = std::max(
                        cell.tail_sup, (y_of(cost, traj.states[k]) - cost.y_star).norm());
                }
            }
        } catch (const std::exception&) {
            cell.blew_up = true;
        }
    });

    fs::create_directories(run.out);
    const fs::path path = run.out / "sweep.csv";
    std::ofstream file(path);
    file << "eps";
    for (int d = 0; d < run.scenario->system.dim(); ++d) file << ",x0_" << d + 1;
    file << ",final_dist,tail_sup,ok\n";
    std::printf("%-8s %-24s %12s %12s  %s\n", "eps", "x0", "final|y-y*|", "tail sup", "ok");
    for (const auto& cell : cells) {
        std::ostringstream x0s;
        for (int d = 0; d < cell.x0.size(); ++d) x0s << (d ? " " : "") << cell.x0[d];
        std::printf("%-8g %-24s %12.5g %12.5g  %s\n", cell.eps, x0s.str().c_str(),
                    cell.final_dist, cell.tail_sup, cell.blew_up ? "blow-up" : "yes");
        file << cell.eps;
        for (int d = 0; d < cell.x0.size(); ++d) file << ',' << cell.x0[d];
        file << ',' << cell.final_dist << ',' << cell.tail_sup << ','
             << (cell.blew_up ? 0 : 1) << "\n";
    }
    std::cout << "wrote " << path.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"partial extremum seeking toolkit"};
    app.require_subcommand(1);

    CommonOpts sim_opts, ver_opts, chk_opts, swp_opts;
    CLI::App* sim = app.add_subcommand("simulate", "run the closed loop, write CSV + SVG");
    add_common(sim, sim_opts);
    CLI::App* ver = app.add_subcommand("verify", "empirical partial-stability verification");
    add_common(ver, ver_opts);
    CLI::App* chk = app.add_subcommand("check", "identity and bound checks");
    add_common(chk, chk_opts);
    CLI::App* swp = app.add_subcommand("sweep", "epsilon / initial-condition sweep");
    add_common(swp, swp_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_opts);
        if (ver->parsed()) return cmd_verify(ver_opts);
        if (chk->parsed()) return cmd_check(chk_opts);
        if (swp->parsed()) return cmd_sweep(swp_opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BlowUpError& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
