#include "pes/scenarios.hpp"

#include <cmath>
#include <limits>

namespace pes {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

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

const CostSpec& Scenario::cost(const std::string& cost_name) const {
    for (const auto& c : costs) {
        if (c.name == cost_name) return c;
    }
    throw std::invalid_argument("scenario '" + name + "' has no cost '" + cost_name + "'");
}

Scenario brockett_scenario() {
    Scenario sc;
    sc.name = "brockett";

    sc.system.y_dim = 2;
    sc.system.z_dim = 1;
    sc.system.drift = zero_field(3);
    sc.system.inputs = {
        {3, 3, [](const Vec& x) { return vec3(1.0, 0.0, x[1]); },
         [](const Vec&) {
             Mat j = Mat::Zero(3, 3);
             j(2, 1) = 1.0;
             return j;
         }},
        {3, 3, [](const Vec& x) { return vec3(0.0, 1.0, -x[0]); },
         [](const Vec&) {
             Mat j = Mat::Zero(3, 3);
             j(2, 0) = -1.0;
             return j;
         }},
    };

    CostSpec j1;
    j1.name = "J1";
    j1.j = {3, [](const Vec& x) {
                return (x[0] - 3.0) * (x[0] - 3.0) + (x[1] - 1.0) * (x[1] - 1.0);
            },
            [](const Vec& x) { return vec3(2.0 * (x[0] - 3.0), 2.0 * (x[1] - 1.0), 0.0); }};
    j1.y_indices = {0, 1};
    j1.y_star = Vec(2);
    j1.y_star << 3.0, 1.0;
    j1.tilde_fields = {
        {3, 2, [](const Vec&) { return vec2(1.0, 0.0); }, nullptr},
        {3, 2, [](const Vec&) { return vec2(0.0, 1.0); }, nullptr},
    };
    j1.domain.y_bounds = {{-10.0, 14.0}, {-10.0, 14.0}};
    j1.domain.z_bounds = {{-kInf, kInf}};
    sc.costs.push_back(std::move(j1));

    CostSpec j2;
    j2.name = "J2";
    j2.j = {3,
            [](const Vec& x) { return (x[0] - 4.0) * (x[0] - 4.0) + x[2] * x[2]; },
            [](const Vec& x) { return vec3(2.0 * (x[0] - 4.0), 0.0, 2.0 * x[2]); }};
    j2.y_indices = {0, 2};
    j2.y_star = Vec(2);
    j2.y_star << 4.0, 0.0;
    j2.tilde_fields = {
        {3, 2, [](const Vec& x) { return vec2(1.0, x[1]); }, nullptr},
        {3, 2, [](const Vec& x) { return vec2(0.0, -x[0]); }, nullptr},
    };
    // the reduced fields are independent only away from x1 = 0
    j2.domain.y_bounds = {{0.2, 6.0}, {-kInf, kInf}};
    j2.domain.z_bounds = {{-kInf, kInf}};
    sc.costs.push_back(std::move(j2));

    RunPreset j1_contA;
    j1_contA.cost = "J1";
    j1_contA.kind = GainKind::contA;
    j1_contA.epsilon = 0.75;
    j1_contA.gamma_outer = Vec(2);
    j1_contA.gamma_outer << 2.0, 2.0;
    j1_contA.x0 = vec3(0.0, 0.0, 2.0);
    j1_contA.T = 60.0;
    RunPreset j1_contB = j1_contA;
    j1_contB.kind = GainKind::contB;
    RunPreset j2_contB = j1_contB;
    j2_contB.cost = "J2";
    j2_contB.x0 = vec3(1.0, 1.0, 2.0);
    sc.presets = {{"j1_contA", j1_contA}, {"j1_contB", j1_contB}, {"j2_contB", j2_contB}};
    return sc;
}

Scenario rigid_body_scenario(double a1, double a2, double a3) {
    require(a1 > 0.0 && a2 > 0.0 && a3 > 0.0, "rigid_body_scenario: inertia must be positive");
    Scenario sc;
    sc.name = "rigid_body";
    const double c1 = (a3 - a2) / a1;
    const double c2 = (a1 - a3) / a2;
    const double c3 = (a2 - a1) / a3;

    sc.system.y_dim = 2;
    sc.system.z_dim = 1;
    sc.system.drift = {3, 3,
                       [c1, c2, c3](const Vec& x) {
                           return vec3(c1 * x[1] * x[2], c2 * x[0] * x[2], c3 * x[0] * x[1]);
                       },
                       [c1, c2, c3](const Vec& x) {
                           Mat j(3, 3);
                           j << 0.0, c1 * x[2], c1 * x[1],  //
                               c2 * x[2], 0.0, c2 * x[0],   //
                               c3 * x[1], c3 * x[0], 0.0;
                           return j;
                       }};
    sc.system.inputs = {constant_field(vec3(1.0, 0.0, 0.0), 3),
                        constant_field(vec3(0.0, 1.0, 0.0), 3)};

    CostSpec j;
    j.name = "J";
    j.j = {3, [](const Vec& x) { return x[0] * x[0] + x[1] * x[1]; },
           [](const Vec& x) { return vec3(2.0 * x[0], 2.0 * x[1], 0.0); }};
    j.y_indices = {0, 1};
    j.y_star = Vec(Vec::Zero(2));
    j.domain.y_bounds = {{-10.0, 10.0}, {-10.0, 10.0}};
    j.domain.z_bounds = {{-kInf, kInf}};
    sc.costs.push_back(std::move(j));

    // partial-output variant: only full-state cost measurements available
    CostSpec jf;
    jf.name = "J_full";
    jf.j = {3, [](const Vec& x) { return x.squaredNorm(); },
            [](const Vec& x) { return Vec(2.0 * x); }};
    jf.y_indices = {0, 1};
    jf.y_star = Vec(Vec::Zero(2));
    jf.domain.y_bounds = {{-10.0, 10.0}, {-10.0, 10.0}};
    jf.domain.z_bounds = {{-kInf, kInf}};
    sc.costs.push_back(std::move(jf));

    sc.reference_v.emplace_back(
        "full", ScalarField{3,
                            [a1, a2, a3](const Vec& x) {
                                return a1 * x[0] * x[0] + a2 * x[1] * x[1] + a3 * x[2] * x[2];
                            },
                            [a1, a2, a3](const Vec& x) {
                                return vec3(2.0 * a1 * x[0], 2.0 * a2 * x[1], 2.0 * a3 * x[2]);
                            }});
    if (a3 > std::max(a1, a2)) {
        const double wa = a1 / (a3 - a2);
        const double wb = a2 / (a3 - a1);
        sc.reference_v.emplace_back(
            "weighted", ScalarField{3,
                                    [wa, wb](const Vec& x) {
                                        return wa * x[0] * x[0] + wb * x[1] * x[1];
                                    },
                                    [wa, wb](const Vec& x) {
                                        return vec3(2.0 * wa * x[0], 2.0 * wb * x[1], 0.0);
                                    }});
    } else if (a3 < std::min(a1, a2)) {
        const double wa = a1 / (a2 - a3);
        const double wb = a2 / (a1 - a3);
        sc.reference_v.emplace_back(
            "weighted", ScalarField{3,
                                    [wa, wb](const Vec& x) {
                                        return wa * x[0] * x[0] + wb * x[1] * x[1];
                                    },
                                    [wa, wb](const Vec& x) {
                                        return vec3(2.0 * wa * x[0], 2.0 * wb * x[1], 0.0);
                                    }});
    }

    // closed-form averaged field (unit effective gain per channel)
    sc.builtin_averaged = {3, 3,
                           [c1, c2, c3](const Vec& x) {
                               return vec3(c1 * x[1] * x[2] - 2.0 * x[0],
                                           c2 * x[0] * x[2] - 2.0 * x[1], c3 * x[0] * x[1]);
                           },
                           [c1, c2, c3](const Vec& x) {
                               Mat j(3, 3);
                               j << -2.0, c1 * x[2], c1 * x[1],  //
                                   c2 * x[2], -2.0, c2 * x[0],   //
                                   c3 * x[1], c3 * x[0], 0.0;
                               return j;
                           }};

    RunPreset j_contA;
    j_contA.cost = "J";
    j_contA.kind = GainKind::contA;
    j_contA.epsilon = 0.25;
    j_contA.gamma_outer = Vec(2);
    j_contA.gamma_outer << 2.0, 2.0;
    j_contA.x0 = vec3(2.0, 1.0, 1.0);
    j_contA.T = 40.0;
    RunPreset j_contB = j_contA;
    j_contB.kind = GainKind::contB;
    j_contB.gamma_outer << 4.0, 4.0;
    RunPreset j_full_contB = j_contB;
    j_full_contB.cost = "J_full";
    sc.presets = {{"j_contA", j_contA}, {"j_contB", j_contB}, {"j_full_contB", j_full_contB}};
    return sc;
}

}  // namespace pes
