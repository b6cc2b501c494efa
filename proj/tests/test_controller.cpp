#include "pes/controller.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace pes;

namespace {
constexpr double kPi = std::numbers::pi;

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
}  // namespace

TEST_CASE("gain pair values") {
    auto [ga0, gp0] = eval_gain_pair(GainKind::contA, 0.0);
    CHECK(ga0 == 0.0);
    CHECK(gp0 == 1.0);
    auto [ga1, gp1] = eval_gain_pair(GainKind::contA, kPi / 2.0);
    CHECK(ga1 == doctest::Approx(1.0));
    CHECK(gp1 == doctest::Approx(0.0).scale(1.0));

    auto [gb0, gb0p] = eval_gain_pair(GainKind::contB, 0.0);
    CHECK(gb0 == 0.0);
    CHECK(gb0p == 0.0);
    // continuous extension: the amplitude vanishes along z = 10^-k
    double prev = 1.0;
    for (int k = 2; k <= 10; ++k) {
        auto [g, gp] = eval_gain_pair(GainKind::contB, std::pow(10.0, -k));
        const double amp = std::hypot(g, gp);
        CHECK(amp < prev);
        prev = amp;
    }
    CHECK(prev < 1e-5);

    CHECK_THROWS_AS(eval_gain_pair(GainKind::contB, -0.1), std::domain_error);
}

TEST_CASE("wronskian residuals") {
    const GainPair pa = make_gain_pair(GainKind::contA);
    CHECK(pa.gamma == 1.0);
    for (double z : {-2.0, 0.0, 0.7, 3.1}) {
        CHECK(std::abs(wronskian_residual(pa, z)) < 1e-6);
    }

    const GainPair pb = make_gain_pair(GainKind::contB);
    CHECK(pb.gamma == 0.25);
    CHECK(std::abs(wronskian_residual(pb, 1.0)) < 1e-5);

    // g = 1, g_pair = -gamma z satisfies the relation exactly
    const double gamma = 0.8;
    const GainPair custom{[](double) { return 1.0; }, [gamma](double z) { return -gamma * z; },
                          nullptr, nullptr, gamma, -1e300};
    CHECK(wronskian_residual(custom, 2.3) == doctest::Approx(0.0).scale(1.0));

    // a mismatched gamma shows up as exactly the gamma error
    GainPair wrong = make_gain_pair(GainKind::contA);
    wrong.gamma = 2.0;
    CHECK(wronskian_residual(wrong, 0.4) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("wronskian identity over sampled arguments") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> za(-9.0, 9.0);
    std::uniform_real_distribution<double> zb(0.05, 10.0);
    const GainPair pa = make_gain_pair(GainKind::contA);
    const GainPair pb = make_gain_pair(GainKind::contB);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        worst = std::max(worst, std::abs(wronskian_residual(pa, za(rng))));
        worst = std::max(worst, std::abs(wronskian_residual(pb, zb(rng))));
    }
    CHECK(worst < 1e-5);

    // analytic derivatives agree with the finite-difference ones
    for (int k = 0; k < 50; ++k) {
        const double z = zb(rng);
        const double h = 1e-6 * std::max(1.0, z);
        const double fd = (pb.g(z + h) - pb.g(z - h)) / (2.0 * h);
        CHECK(pb.dg(z) == doctest::Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("contB gains stay inside the unit interval") {
    for (int k = 0; k <= 2000; ++k) {
        const double z = 0.02 * k;
        auto [g, gp] = eval_gain_pair(GainKind::contB, z);
        CHECK(std::abs(g) <= 1.0);
        CHECK(std::abs(gp) <= 1.0);
    }
}

TEST_CASE("control law values") {
    const auto params = make_es_params(GainKind::contA, 2, kPi, vec2(1.0, 1.0));

    // J = 0: sin(0) kills the in-phase term and the channel-1 quadrature
    // dither is 0 at t = 0; channel 2 carries its -cos component
    const Vec u0 = es_control(0.0, 0.0, params);
    CHECK(u0[0] == 0.0);
    CHECK(u0[1] == doctest::Approx(-std::sqrt(2.0 * kPi) / std::sqrt(kPi)).epsilon(1e-12));

    // J = pi/2, t = 0, eps = pi: u1 = sqrt(pi/pi) * 1 * cos(0) scaled by sqrt(pi)
    const Vec u = es_control(0.0, kPi / 2.0, params);
    CHECK(u[0] == doctest::Approx(1.0).epsilon(1e-12));

    // all dithers zero
    EsControllerParams zeroed = params;
    for (auto& w : zeroed.dither) w = {[](double) { return 0.0; }, 0.0};
    CHECK(es_control(1.7, 0.3, zeroed).norm() == 0.0);
}

TEST_CASE("control is periodic in t with period eps") {
    const auto params = make_es_params(GainKind::contA, 2, 0.75, vec2(2.0, 2.0));
    for (double t : {0.0, 0.2, 0.374, 0.6}) {
        const Vec u0 = es_control(t, 1.3, params);
        const Vec u1 = es_control(t + 0.75, 1.3, params);
        CHECK((u0 - u1).norm() < 1e-12);
    }
}

TEST_CASE("gain domain errors propagate") {
    const auto params = make_es_params(GainKind::contB, 1, 0.5, Vec(Vec::Ones(1)));
    CHECK_THROWS_AS(es_control(0.0, -1.0, params), std::domain_error);
}

TEST_CASE("closed-loop field composition") {
    // brockett-style system assembled inline
    InputAffineSystem sys;
    sys.y_dim = 2;
    sys.z_dim = 1;
    sys.drift = zero_field(3);
    sys.inputs = {{3, 3, [](const Vec& x) { return vec3(1.0, 0.0, x[1]); }, nullptr},
                  {3, 3, [](const Vec& x) { return vec3(0.0, 1.0, -x[0]); }, nullptr}};
    const ScalarField cost{3, [](const Vec& x) { return x.squaredNorm(); }, nullptr};

    // frozen controls reproduce the affine combination
    const Vec x = vec3(0.5, 2.0, -1.0);
    CHECK((eval_with_controls(sys, x, vec2(1.0, 0.0)) - vec3(1.0, 0.0, 2.0)).norm() == 0.0);

    // zero dithers collapse the loop onto the drift
    auto params = make_es_params(GainKind::contA, 2, 0.5, vec2(2.0, 2.0));
    for (auto& w : params.dither) w = {[](double) { return 0.0; }, 0.0};
    const TimeVaryingField loop = closed_loop_field(sys, cost, params);
    CHECK((loop.eval(0.3, x) - sys.drift.eval(x)).norm() == 0.0);

    CHECK_THROWS_AS(closed_loop_field(sys, ScalarField{2, nullptr, nullptr}, params),
                    std::invalid_argument);

    // no input channels at all: the loop is the bare drift
    InputAffineSystem drift_only;
    drift_only.y_dim = 2;
    drift_only.z_dim = 1;
    drift_only.drift = {3, 3, [](const Vec& x) { return vec3(x[1], -x[0], 0.0); }, nullptr};
    EsControllerParams empty;
    empty.epsilon = 0.5;
    empty.gamma_outer = Vec(0);
    const TimeVaryingField bare = closed_loop_field(drift_only, cost, empty);
    CHECK((bare.eval(1.0, x) - drift_only.drift.eval(x)).norm() == 0.0);
}
