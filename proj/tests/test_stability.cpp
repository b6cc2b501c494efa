#include "pes/stability.hpp"

#include "pes/scenarios.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pes;

namespace {
Vec scalar(double v) {
    Vec x(1);
    x << v;
    return x;
}
Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

Trajectory sampled_decay(double t_end, double step) {
    Trajectory traj;
    traj.step = step;
    for (double t = 0.0; t <= t_end + 1e-12; t += step) {
        traj.times.push_back(t);
        traj.states.push_back(scalar(std::exp(-t)));
    }
    return traj;
}
}  // namespace

TEST_CASE("convergence time") {
    const Vec star = Vec::Zero(1);

    Trajectory inside;
    inside.step = 0.1;
    for (int k = 0; k <= 10; ++k) {
        inside.times.push_back(1.0 + 0.1 * k);
        inside.states.push_back(scalar(0.05));
    }
    CHECK(convergence_time(inside, star, 0.1) == doctest::Approx(1.0));

    Trajectory outside;
    outside.step = 0.1;
    for (int k = 0; k <= 10; ++k) {
        outside.times.push_back(0.1 * k);
        outside.states.push_back(scalar(2.0));
    }
    CHECK(!convergence_time(outside, star, 0.1).has_value());

    const Trajectory decay = sampled_decay(6.0, 0.01);
    const auto tau = convergence_time(decay, star, std::exp(-2.0));
    REQUIRE(tau.has_value());
    CHECK(*tau == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("verifier: averaged rigid body is stable, scalar growth fails") {
    const Scenario rig = rigid_body_scenario();
    const VectorField f14 = rig.builtin_averaged;
    const FlowFn avg_flow = [f14](const Vec& x0, double t0, double, double T) {
        return integrate(autonomous(f14), x0, t0, t0 + T, 0.01);
    };
    std::vector<Vec> z0{scalar(0.5), scalar(1.0), scalar(2.0)};
    std::vector<double> t0{0.0};
    VerifyOptions opts;
    opts.ball_samples = 8;
    opts.autonomous = true;

    const StabilityReport rep = verify_practical_partial_stability(
        avg_flow, Vec(Vec::Zero(2)), 2.0, std::vector<double>{0.5, 0.2}, {}, z0, t0, 15.0,
        opts);
    CHECK(rep.verdict == Verdict::stable);
    CHECK(recheck_report(rep));
    for (const auto& res : rep.results) {
        CHECK(res.attained);
        CHECK(res.t1 > 0.0);
        for (const auto& run : res.runs) {
            if (run.converged) CHECK(run.sup_y_dev_after_t1 <= res.rho);
        }
    }

    const FlowFn growth_flow = [](const Vec& x0, double t0, double, double T) {
        const TimeVaryingField growth{1, [](double, const Vec& x) { return x; }};
        return integrate(growth, x0, t0, t0 + T, 0.01);
    };
    const StabilityReport bad = verify_practical_partial_stability(
        growth_flow, Vec(Vec::Zero(1)), 1.0, std::vector<double>{0.5}, {}, {}, t0, 10.0, opts);
    CHECK(bad.verdict == Verdict::failed);
}

TEST_CASE("blow-ups are recorded as failed runs, not crashes") {
    const FlowFn explosive = [](const Vec& x0, double t0, double, double T) {
        const TimeVaryingField cube{1, [](double, const Vec& x) {
                                        return Vec(x.array().cube());
                                    }};
        return integrate(cube, x0, t0, t0 + T, 0.001);
    };
    VerifyOptions opts;
    opts.ball_samples = 4;
    opts.autonomous = true;
    const StabilityReport rep = verify_practical_partial_stability(
        explosive, Vec(Vec::Zero(1)), 1.0, std::vector<double>{0.5}, {}, {},
        std::vector<double>{0.0}, 5.0, opts);
    CHECK(rep.verdict == Verdict::failed);
}

TEST_CASE("verifier is invariant to t0 shifts by whole periods") {
    const Scenario bro = brockett_scenario();
    Vec gam = vec2(2.0, 2.0);
    const InputAffineSystem sys = bro.system;
    const ScalarField cost = bro.cost("J1").j;
    const FlowFn loop = [sys, cost, gam](const Vec& x0, double t0, double eps, double T) {
        const auto params = make_es_params(GainKind::contA, 2, eps, gam);
        return integrate_closed_loop(sys, params, cost, x0, T, 64, t0);
    };
    VerifyOptions opts;
    opts.ball_samples = 4;
    std::vector<Vec> z0{scalar(2.0)};
    const std::vector<double> eps{0.5};
    const std::vector<double> rho{0.8};

    const auto rep0 = verify_practical_partial_stability(
        loop, vec2(3.0, 1.0), 2.0, rho, eps, z0, std::vector<double>{0.0}, 20.0, opts);
    const auto rep1 = verify_practical_partial_stability(
        loop, vec2(3.0, 1.0), 2.0, rho, eps, z0, std::vector<double>{2.0}, 20.0, opts);
    REQUIRE(rep0.results.size() == rep1.results.size());
    CHECK(rep0.verdict == rep1.verdict);
    CHECK(rep0.results[0].epsilon_bar == rep1.results[0].epsilon_bar);
    REQUIRE(rep0.results[0].runs.size() == rep1.results[0].runs.size());
    for (std::size_t k = 0; k < rep0.results[0].runs.size(); ++k) {
        // t0 = 2.0 is four whole periods of eps = 0.5: identical dither phase
        CHECK(rep0.results[0].runs[k].sup_y_dev_after_t1 ==
              doctest::Approx(rep1.results[0].runs[k].sup_y_dev_after_t1).epsilon(1e-12));
    }
}

TEST_CASE("lyapunov shell conditions on the rigid body") {
    const Scenario rig = rigid_body_scenario(1.0, 2.0, 3.0);
    const AveragedSystem f14{rig.builtin_averaged, AveragedSystem::Source::es_closed_form};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<Vec> samples;
    for (int k = 0; k < 4000; ++k) samples.push_back(vec3(u(rng), u(rng), u(rng)));
    const std::vector<double> shells{0.4, 0.8, 1.2, 1.6, 2.0, 2.4, 2.8, 3.2, 3.6, 4.0};
    const Vec y_star = Vec::Zero(2);
    const Vec x_star = Vec::Zero(3);

    // V with the inertia-weighted x3 term: the y-shell sandwich fails, the
    // full-state upper bound and the decay condition hold
    const auto full = lyapunov_conditions(rig.reference_v.front().second, f14, y_star,
                                          samples, shells, x_star);
    CHECK(!full.sandwich_ok);
    CHECK(full.sandwich_x_ok);
    CHECK(full.decay_ok);
    CHECK(full.alpha3.valid());

    // weighted V depending on y only: both conditions hold
    REQUIRE(rig.reference_v.size() >= 2);
    const auto weighted = lyapunov_conditions(rig.reference_v[1].second, f14, y_star, samples,
                                              shells, x_star);
    CHECK(weighted.sandwich_ok);
    CHECK(weighted.decay_ok);
    CHECK(weighted.alpha1.valid());
    CHECK(weighted.alpha2.valid());

    // textbook quadratic pair passes trivially
    const ScalarField vq{3, [](const Vec& x) { return x[0] * x[0] + x[1] * x[1]; },
                         [](const Vec& x) { return vec3(2.0 * x[0], 2.0 * x[1], 0.0); }};
    const VectorField fq{3, 3, [](const Vec& x) { return vec3(-x[0], -x[1], 0.0); }, nullptr};
    const auto quad = lyapunov_conditions(
        vq, {fq, AveragedSystem::Source::es_closed_form}, y_star, samples, shells);
    CHECK(quad.sandwich_ok);
    CHECK(quad.decay_ok);

    CHECK_THROWS_AS(lyapunov_conditions(vq, f14, y_star, samples, std::vector<double>{1e-6}),
                    std::invalid_argument);
}

TEST_CASE("class-K envelopes anchor at zero and increase") {
    const Scenario rig = rigid_body_scenario();
    const AveragedSystem f14{rig.builtin_averaged, AveragedSystem::Source::es_closed_form};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<Vec> samples;
    for (int k = 0; k < 2000; ++k) samples.push_back(vec3(u(rng), u(rng), u(rng)));
    const std::vector<double> shells{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    REQUIRE(rig.reference_v.size() >= 2);
    const auto rep = lyapunov_conditions(rig.reference_v[1].second, f14, Vec(Vec::Zero(2)),
                                         samples, shells);
    for (const ClassKEnvelope* env : {&rep.alpha1, &rep.alpha2, &rep.alpha3}) {
        REQUIRE(!env->knots.empty());
        CHECK(env->knots.front().first == 0.0);
        CHECK(env->knots.front().second == 0.0);
        CHECK(env->valid());
        CHECK(env->value(0.0) == 0.0);
        // envelopes bracket the shell statistics they summarize
        CHECK(env->value(10.0) == env->knots.back().second);
    }
    // alpha1 lower-bounds alpha2 shell-wise on y-shell data
    for (double r : shells) CHECK(rep.alpha1.value(r) <= rep.alpha2.value(r) + 1e-12);
}

namespace {
// closed-form singular values of a 2x2 matrix
std::pair<double, double> svd2x2(double a, double b, double c, double d) {
    const double t1 = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double t2 = std::sqrt(std::max(0.0, t1 * t1 - 4.0 * det * det));
    const double s_max = std::sqrt((t1 + t2) / 2.0);
    const double s_min = std::sqrt(std::max(0.0, (t1 - t2) / 2.0));
    return {s_max, s_min};
}
}  // namespace

TEST_CASE("f-matrix minimum singular value") {
    const Scenario bro = brockett_scenario();

    // J1 fields are the identity columns
    std::vector<Vec> grid{vec3(0.0, 0.0, 0.0), vec3(2.0, -3.0, 1.0), vec3(5.0, 5.0, 5.0)};
    const auto [sv1, arg1] = f_matrix_min_singular(bro.cost("J1").tilde_fields, grid);
    CHECK(sv1 == doctest::Approx(1.0).epsilon(1e-12));

    // J2 at x = (1, 1, 2): F = [[1, 0], [1, -1]], golden-ratio singular values
    const std::vector<Vec> point{vec3(1.0, 1.0, 2.0)};
    const auto [sv2, arg2] = f_matrix_min_singular(bro.cost("J2").tilde_fields, point);
    const auto [smax, smin] = svd2x2(1.0, 0.0, 1.0, -1.0);
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(smax == doctest::Approx(phi).epsilon(1e-12));
    CHECK(smin == doctest::Approx(1.0 / phi).epsilon(1e-12));
    CHECK(sv2 == doctest::Approx(smin).epsilon(1e-12));
    CHECK(smax * smin == doctest::Approx(1.0).epsilon(1e-12));  // |det F| = 1

    // a grid containing x1 = 0 drives the minimum to zero
    std::vector<Vec> with_zero = grid;
    with_zero.push_back(vec3(0.0, 1.0, 0.0));
    const auto [sv0, arg0] = f_matrix_min_singular(bro.cost("J2").tilde_fields, with_zero);
    CHECK(sv0 <= 1e-12);
    CHECK(arg0[0] == 0.0);
}
