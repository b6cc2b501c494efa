#include "pes/averaging.hpp"

#include "pes/scenarios.hpp"
#include "pes/util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pes;

namespace {

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

std::vector<Vec> seeded_grid(std::uint64_t seed, const Vec& lo, const Vec& hi,
                             std::size_t count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec> grid;
    for (std::size_t k = 0; k < count; ++k) {
        Vec x(lo.size());
        for (int d = 0; d < lo.size(); ++d) x[d] = lo[d] + (hi[d] - lo[d]) * u(rng);
        grid.push_back(std::move(x));
    }
    return grid;
}

}  // namespace

TEST_CASE("lie bracket system construction") {
    const Scenario bro = brockett_scenario();

    NuMatrix zero_nu{Mat::Zero(2, 2), 0};
    const AveragedSystem trivial = lie_bracket_system(bro.system, zero_nu);
    const Vec x = vec3(1.0, 2.0, 3.0);
    CHECK((trivial.field.eval(x) - bro.system.drift.eval(x)).norm() == 0.0);
    CHECK(trivial.source == AveragedSystem::Source::bracket_sum);

    NuMatrix nu{Mat::Zero(2, 2), 0};
    nu.values(0, 1) = 1.0;
    const AveragedSystem sys = lie_bracket_system(bro.system, nu);
    // [f1, f2] = (0, 0, -2) on the whole space
    CHECK((sys.field.eval(x) - vec3(0.0, 0.0, -2.0)).norm() < 1e-7);

    InputAffineSystem single = bro.system;
    single.inputs.resize(1);
    const AveragedSystem empty_sum = lie_bracket_system(single, NuMatrix{Mat::Zero(1, 1), 0});
    CHECK((empty_sum.field.eval(x) - bro.system.drift.eval(x)).norm() == 0.0);
}

TEST_CASE("closed-form averaged field") {
    const Scenario rig = rigid_body_scenario(1.0, 2.0, 3.0);
    const Vec x = vec3(2.0, 1.0, 1.0);

    const AveragedSystem off = es_averaged_field(rig.system, rig.cost("J").j, Vec::Zero(2));
    CHECK((off.field.eval(x) - rig.system.drift.eval(x)).norm() == 0.0);

    // drift (1, -2, 2/3) minus (4, 2, 0)
    const AveragedSystem avg = es_averaged_field(rig.system, rig.cost("J").j, Vec::Ones(2));
    CHECK((avg.field.eval(x) - vec3(-3.0, -4.0, 2.0 / 3.0)).norm() < 1e-12);
    CHECK(avg.source == AveragedSystem::Source::es_closed_form);

    const Scenario bro = brockett_scenario();
    const AveragedSystem ab = es_averaged_field(bro.system, bro.cost("J1").j, Vec::Ones(2));
    const Vec at_min = ab.field.eval(vec3(3.0, 1.0, 5.0));
    CHECK(std::abs(at_min[0]) < 1e-12);
    CHECK(std::abs(at_min[1]) < 1e-12);
}

TEST_CASE("effective gammas combine pair gamma, outer gain and nu") {
    const auto pa = make_es_params(GainKind::contA, 2, 0.75, vec2(2.0, 2.0));
    const Vec ga = effective_gammas(pa);
    CHECK(ga[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ga[1] == doctest::Approx(1.0).epsilon(1e-9));

    const auto pb = make_es_params(GainKind::contB, 2, 0.75, vec2(4.0, 4.0));
    CHECK(effective_gammas(pb)[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("bracket sum equals the closed form on both scenarios") {
    const Scenario bro = brockett_scenario();
    const Scenario rig = rigid_body_scenario();

    const auto pa = make_es_params(GainKind::contA, 2, 0.25, vec2(2.0, 2.0));
    const auto grid_b = seeded_grid(11, vec3(0.0, 0.0, 0.0), vec3(5.0, 5.0, 5.0), 50);
    CHECK(averaged_equivalence_residual(bro.system, bro.cost("J1").j, pa, grid_b) < 1e-5);

    const auto pb = make_es_params(GainKind::contB, 2, 0.25, vec2(2.0, 2.0));
    auto grid_r = seeded_grid(13, vec3(-2.0, -2.0, -2.0), vec3(2.0, 2.0, 2.0), 50);
    for (auto& x : grid_r) {
        if (x.head(2).norm() < 0.1) x[0] += 0.5;  // keep J > 0
    }
    CHECK(averaged_equivalence_residual(rig.system, rig.cost("J").j, pb, grid_r) < 1e-5);

    // zero outer gains make both constructions the drift
    const auto zero = make_es_params(GainKind::contA, 2, 0.25, vec2(0.0, 0.0));
    CHECK(averaged_equivalence_residual(bro.system, bro.cost("J1").j, zero, grid_b) == 0.0);
}

TEST_CASE("effective system carries analytic jacobians when available") {
    const Scenario bro = brockett_scenario();
    const auto params = make_es_params(GainKind::contA, 2, 0.25, vec2(2.0, 2.0));
    const InputAffineSystem eff =
        effective_bracket_system(bro.system, bro.cost("J1").j, params);
    REQUIRE(eff.num_inputs() == 4);
    const Vec x = vec3(1.0, 2.0, 0.5);
    for (const auto& b : eff.inputs) {
        REQUIRE(b.has_jacobian());
        const Mat ja = b.jac(x);
        const VectorField fd{3, 3, b.eval, nullptr};
        CHECK((ja - jacobian_at(fd, x).matrix).norm() < 1e-5 * std::max(1.0, ja.norm()));
    }
}
