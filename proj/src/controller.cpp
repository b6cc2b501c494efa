#include "pes/controller.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pes {

GainKind gain_kind_from_string(const std::string& name) {
    if (name == "contA") return GainKind::contA;
    if (name == "contB") return GainKind::contB;
    if (name == "custom") return GainKind::custom;
    throw std::invalid_argument("unknown gain kind '" + name + "'");
}

std::string to_string(GainKind kind) {
    switch (kind) {
        case GainKind::contA: return "contA";
        case GainKind::contB: return "contB";
        case GainKind::custom: return "custom";
    }
    return "?";
}

namespace {

// amplitude^2 and phase of the bounded pair, z > 0
double cont_b_q(double z) { return (1.0 - std::exp(-z / 4.0)) / (1.0 + std::exp(z / 4.0)); }
double cont_b_phase(double z) { return std::exp(z / 4.0) + 2.0 * std::log(std::expm1(z / 4.0)); }

// beyond this the amplitude is < 1e-32 and the phase would overflow
constexpr double kContBTail = 600.0;

std::pair<double, double> cont_b_values(double z) {
    if (z < 0.0) throw std::domain_error("contB gains are defined for z >= 0");
    if (z == 0.0 || z > kContBTail) return {0.0, 0.0};
    const double amp = std::sqrt(cont_b_q(z));
    const double phase = cont_b_phase(z);
    return {amp * std::sin(phase), amp * std::cos(phase)};
}

std::pair<double, double> cont_b_derivatives(double z) {
    if (z <= 0.0 || z > kContBTail) return {0.0, 0.0};
    const double e = std::exp(z / 4.0);
    const double q = cont_b_q(z);
    const double dq = 0.25 * (std::exp(-z / 4.0) + 2.0 - e) / ((1.0 + e) * (1.0 + e));
    const double amp = std::sqrt(q);
    const double damp = dq / (2.0 * amp);
    const double dphase = 0.25 * e * (e + 1.0) / (e - 1.0);
    const double phase = cont_b_phase(z);
    const double s = std::sin(phase);
    const double c = std::cos(phase);
    return {damp * s + amp * dphase * c, damp * c - amp * dphase * s};
}

}  // namespace

GainPair make_gain_pair(GainKind kind) {
    switch (kind) {
        case GainKind::contA:
            return {[](double z) { return std::sin(z); }, [](double z) { return std::cos(z); },
                    [](double z) { return std::cos(z); }, [](double z) { return -std::sin(z); },
                    1.0, -std::numeric_limits<double>::infinity()};
        case GainKind::contB:
            return {[](double z) { return cont_b_values(z).first; },
                    [](double z) { return cont_b_values(z).second; },
                    [](double z) { return cont_b_derivatives(z).first; },
                    [](double z) { return cont_b_derivatives(z).second; },
                    0.25, 0.0};
        case GainKind::custom: break;
    }
    throw std::invalid_argument("make_gain_pair: custom pairs are built by the caller");
}

std::pair<double, double> eval_gain_pair(GainKind kind, double z) {
    switch (kind) {
        case GainKind::contA: return {std::sin(z), std::cos(z)};
        case GainKind::contB: return cont_b_values(z);
        case GainKind::custom: break;
    }
    throw std::invalid_argument("eval_gain_pair: no canonical custom pair");
}

double wronskian_residual(const GainPair& pair, double z, double fd_scale) {
    const double h = fd_scale * std::max(1.0, std::abs(z));
    const double dg = (pair.g(z + h) - pair.g(z - h)) / (2.0 * h);
    const double dgp = (pair.g_pair(z + h) - pair.g_pair(z - h)) / (2.0 * h);
    return pair.g(z) * dgp - dg * pair.g_pair(z) + pair.gamma;
}

EsControllerParams make_es_params(GainKind kind, int m, double epsilon,
                                  const Vec& gamma_outer, double dither_scale,
                                  int nu_points) {
    require(m >= 1, "make_es_params: need m >= 1 channels");
    require(epsilon > 0.0, "make_es_params: epsilon must be positive");
    require(static_cast<int>(gamma_outer.size()) == m,
            "make_es_params: gamma_outer must have one entry per channel");
    EsControllerParams params;
    params.epsilon = epsilon;
    params.gamma_outer = gamma_outer;
    params.gains.reserve(m);
    for (int i = 0; i < m; ++i) params.gains.push_back(make_gain_pair(kind));
    params.dither = quadrature_family(m, dither_scale);
    const NuMatrix nu = nu_matrix(params.dither, nu_points);
    require(nu_pattern_ok(nu, m, 1e-8, &params.nu_pairs),
            "make_es_params: dither family violates the nu pairing pattern");
    return params;
}

Vec es_control(double t, double j_value, const EsControllerParams& params) {
    const int m = params.channels();
    require(static_cast<int>(params.dither.size()) == 2 * m, "es_control: need 2m dither signals");
    double theta = std::fmod(t / params.epsilon, 1.0);
    if (theta < 0.0) theta += 1.0;
    const double inv_sqrt_eps = 1.0 / std::sqrt(params.epsilon);
    Vec u(m);
    for (int i = 0; i < m; ++i) {
        const auto& pair = params.gains[i];
        if (j_value < pair.domain_lo) {
            throw std::domain_error("es_control: cost value " + std::to_string(j_value) +
                                    " below gain domain");
        }
        u[i] = params.gamma_outer[i] * inv_sqrt_eps *
               (pair.g(j_value) * params.dither[i].shape(theta) +
                pair.g_pair(j_value) * params.dither[i + m].shape(theta));
    }
    return u;
}

TimeVaryingField closed_loop_field(const InputAffineSystem& sys, const ScalarField& cost,
                                   const EsControllerParams& params) {
    validate_system(sys);
    require(params.channels() == sys.num_inputs(),
            "closed_loop_field: controller channels do not match system inputs");
    require(cost.dim == sys.dim(), "closed_loop_field: cost dimension mismatch");
    const int n = sys.dim();
    return {n, [sys, cost, params](double t, const Vec& x) {
                const Vec u = es_control(t, cost.eval(x), params);
                return eval_with_controls(sys, x, u);
            }};
}

}  // namespace pes
