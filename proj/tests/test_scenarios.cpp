#include "pes/scenarios.hpp"

#include "pes/averaging.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pes;

namespace {
Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}
}  // namespace

TEST_CASE("brockett scenario data") {
    const Scenario sc = brockett_scenario();
    CHECK(sc.system.num_inputs() == 2);
    CHECK(sc.system.drift.eval(vec3(1.0, 2.0, 3.0)).norm() == 0.0);

    const CostSpec& j1 = sc.cost("J1");
    CHECK(j1.j.eval(vec3(3.0, 1.0, 7.0)) == 0.0);
    CHECK(j1.j.grad(vec3(3.0, 1.0, 7.0)).norm() == 0.0);

    const CostSpec& j2 = sc.cost("J2");
    CHECK(j2.j.eval(vec3(4.0, -2.0, 0.0)) == 0.0);
    CHECK(j2.j.grad(vec3(4.0, -2.0, 0.0)).norm() == 0.0);

    CHECK((sc.system.inputs[1].eval(vec3(1.0, 1.0, 2.0)) - vec3(0.0, 1.0, -1.0)).norm() ==
          0.0);

    // constant bracket on a grid
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int k = 0; k < 30; ++k) {
        const Vec x = vec3(u(rng), u(rng), u(rng));
        CHECK((lie_bracket(sc.system.inputs[0], sc.system.inputs[1], x) -
               vec3(0.0, 0.0, -2.0))
                  .norm() < 1e-9);
    }

    CHECK(sc.presets.at("j1_contA").epsilon == 0.75);
    CHECK((sc.presets.at("j1_contA").x0 - vec3(0.0, 0.0, 2.0)).norm() == 0.0);
    CHECK((sc.presets.at("j2_contB").x0 - vec3(1.0, 1.0, 2.0)).norm() == 0.0);
    CHECK(sc.cost("J2").domain.y_bounds[0].first == 0.2);

    CHECK_THROWS_AS((void)sc.cost("nope"), std::invalid_argument);
    CHECK_THROWS_AS(rigid_body_scenario(1.0, -2.0, 3.0), std::invalid_argument);
}

TEST_CASE("rigid body scenario data") {
    const Scenario sc = rigid_body_scenario(1.0, 2.0, 3.0);
    const Vec x = vec3(2.0, 1.0, 1.0);

    CHECK((sc.system.drift.eval(x) - vec3(1.0, -2.0, 2.0 / 3.0)).norm() < 1e-15);
    CHECK((sc.builtin_averaged.eval(x) - vec3(-3.0, -4.0, 2.0 / 3.0)).norm() < 1e-15);

    // decay identity at the probe point: -4 (A1 x1^2 + A2 x2^2) = -24
    const ScalarField& v = sc.reference_v.front().second;
    CHECK(v.grad(x).dot(sc.builtin_averaged.eval(x)) == doctest::Approx(-24.0));

    CHECK(sc.presets.at("j_contA").epsilon == 0.25);
    CHECK((sc.presets.at("j_contA").x0 - vec3(2.0, 1.0, 1.0)).norm() == 0.0);
}

TEST_CASE("closed-form field matches the generic construction") {
    const Scenario sc = rigid_body_scenario();
    const AveragedSystem generic = es_averaged_field(sc.system, sc.cost("J").j, Vec::Ones(2));
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Vec x = vec3(u(rng), u(rng), u(rng));
        worst = std::max(worst,
                         (generic.field.eval(x) - sc.builtin_averaged.eval(x)).norm());
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("decay identity holds pointwise") {
    const double a1 = 1.0, a2 = 2.0, a3 = 3.0;
    const Scenario sc = rigid_body_scenario(a1, a2, a3);
    const ScalarField& v = sc.reference_v.front().second;
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 100; ++k) {
        const Vec x = vec3(u(rng), u(rng), u(rng));
        const double lv = v.grad(x).dot(sc.builtin_averaged.eval(x));
        CHECK(lv == doctest::Approx(-4.0 * (a1 * x[0] * x[0] + a2 * x[1] * x[1]))
                        .epsilon(1e-8));
    }
}

TEST_CASE("weighted lyapunov choices match the inertia ordering") {
    const Scenario top_heavy = rigid_body_scenario(1.0, 2.0, 3.0);
    REQUIRE(top_heavy.reference_v.size() == 2);
    // V = A1/(A3-A2) x1^2 + A2/(A3-A1) x2^2 = x1^2 + x2^2 for A = (1,2,3)
    const ScalarField& w = top_heavy.reference_v[1].second;
    CHECK(w.eval(vec3(1.0, 1.0, 9.0)) == doctest::Approx(2.0));

    const Scenario flat = rigid_body_scenario(2.0, 3.0, 1.0);
    REQUIRE(flat.reference_v.size() == 2);  // min(A1,A2) > A3 variant
    const ScalarField& w2 = flat.reference_v[1].second;
    CHECK(w2.eval(vec3(1.0, 0.0, 0.0)) == doctest::Approx(2.0 / (3.0 - 1.0)));

    const Scenario middle = rigid_body_scenario(1.0, 3.0, 2.0);
    CHECK(middle.reference_v.size() == 1);  // no weighted form applies
}
