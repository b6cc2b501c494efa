#pragma once

#include "pes/dither.hpp"
#include "pes/system.hpp"
#include "pes/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pes {

enum class GainKind { contA, contB, custom };

GainKind gain_kind_from_string(const std::string& name);
std::string to_string(GainKind kind);

/// Paired scalar gains (g, g_pair) whose Wronskian g*g_pair' - g'*g_pair is
/// identically -gamma. contA is (sin z, cos z) with gamma = 1; contB is the
/// bounded sigmoid-amplitude pair with gamma = 1/4, defined for z >= 0 and
/// continuously extended by (0,0) at z = 0.
struct GainPair {
    std::function<double(double)> g;
    std::function<double(double)> g_pair;
    std::function<double(double)> dg;       // optional analytic derivatives
    std::function<double(double)> dg_pair;
    double gamma = 1.0;
    double domain_lo = -std::numeric_limits<double>::infinity();
};

GainPair make_gain_pair(GainKind kind);

/// (g(z), g_pair(z)) for the named family; throws std::domain_error for
/// contB with z < 0.
std::pair<double, double> eval_gain_pair(GainKind kind, double z);

/// g*g_pair' - g'*g_pair + gamma at z, derivatives by central differences
/// with step fd_scale * max(1, |z|). Zero iff the pair relation holds at z.
double wronskian_residual(const GainPair& pair, double z, double fd_scale = 1e-6);

/// Everything the oscillatory control law needs: u_i(t, J) =
/// (gamma_outer_i / sqrt(eps)) * (g_i(J) w_i(t/eps) + g_{i+m}(J) w_{i+m}(t/eps)).
struct EsControllerParams {
    double epsilon = 0.0;
    std::vector<GainPair> gains;        // one pair per channel
    std::vector<DitherSignal> dither;   // 2m signals, unit period
    Vec gamma_outer;                    // m outer prefactors
    Vec nu_pairs;                       // nu_{i,i+m} of the stored dither

    [[nodiscard]] int channels() const { return static_cast<int>(gains.size()); }
};

/// Build params with the quadrature dither family (scale 1, i.e. channel i at
/// amplitude sqrt(pi*i)) and validate the nu pairing pattern.
EsControllerParams make_es_params(GainKind kind, int m, double epsilon,
                                  const Vec& gamma_outer, double dither_scale = 1.0,
                                  int nu_points = 1024);

/// Control vector u(t, J) in R^m.
Vec es_control(double t, double j_value, const EsControllerParams& params);

/// (t, x) -> f0(x) + sum_i f_i(x) u_i(t, J(x)).
TimeVaryingField closed_loop_field(const InputAffineSystem& sys, const ScalarField& cost,
                                   const EsControllerParams& params);

}  // namespace pes
