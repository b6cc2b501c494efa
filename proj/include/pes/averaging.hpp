#pragma once

#include "pes/controller.hpp"
#include "pes/dither.hpp"
#include "pes/system.hpp"
#include "pes/types.hpp"

#include <span>

namespace pes {

/// Autonomous field approximating a dithered system as eps -> 0, tagged with
/// how it was built.
struct AveragedSystem {
    enum class Source { bracket_sum, es_closed_form };
    VectorField field;
    Source source = Source::bracket_sum;
};

/// x -> f0(x) + sum_{i<j} [f_i, f_j](x) nu_ij.
AveragedSystem lie_bracket_system(const InputAffineSystem& sys, const NuMatrix& nu);

/// Closed-form averaged field of the extremum seeking loop:
/// x -> f0(x) - sum_i gamma_i f_i(x) f_i(x)^T grad J(x).
AveragedSystem es_averaged_field(const InputAffineSystem& sys, const ScalarField& cost,
                                 const Vec& gammas);

/// The 2m-channel system whose input fields are gamma_outer_i g_i(J(x)) f_i(x)
/// and gamma_outer_i g_{i+m}(J(x)) f_i(x); its bracket system under the stored
/// dither equals the closed form above.
InputAffineSystem effective_bracket_system(const InputAffineSystem& sys,
                                           const ScalarField& cost,
                                           const EsControllerParams& params);

/// Per-channel gain of the closed form implied by params:
/// gamma_pair_i * gamma_outer_i^2 * nu_{i,i+m}.
Vec effective_gammas(const EsControllerParams& params);

/// sup over the grid of |bracket-sum field - closed-form field|.
double averaged_equivalence_residual(const InputAffineSystem& sys, const ScalarField& cost,
                                     const EsControllerParams& params,
                                     std::span<const Vec> grid);

}  // namespace pes
