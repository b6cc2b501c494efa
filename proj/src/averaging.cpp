#include "pes/averaging.hpp"

#include <cmath>

namespace pes {

AveragedSystem lie_bracket_system(const InputAffineSystem& sys, const NuMatrix& nu) {
    validate_system(sys);
    const int m = sys.num_inputs();
    require(nu.values.rows() == m && nu.values.cols() == m,
            "lie_bracket_system: nu matrix must be m x m");
    const int n = sys.dim();
    VectorField field{n, n,
                      [sys, nu, n](const Vec& x) {
                          Vec out = sys.drift.eval(x);
                          const int m_in = sys.num_inputs();
                          for (int i = 0; i < m_in; ++i) {
                              for (int j = i + 1; j < m_in; ++j) {
                                  const double coeff = nu.values(i, j);
                                  if (coeff == 0.0) continue;
                                  out += coeff * lie_bracket(sys.inputs[i], sys.inputs[j], x);
                              }
                          }
                          return out;
                      },
                      nullptr};
    return {std::move(field), AveragedSystem::Source::bracket_sum};
}

AveragedSystem es_averaged_field(const InputAffineSystem& sys, const ScalarField& cost,
                                 const Vec& gammas) {
    validate_system(sys);
    require(static_cast<int>(gammas.size()) == sys.num_inputs(),
            "es_averaged_field: one gamma per input field required");
    require(cost.dim == sys.dim(), "es_averaged_field: cost dimension mismatch");
    const int n = sys.dim();
    VectorField field{n, n,
                      [sys, cost, gammas](const Vec& x) {
                          Vec out = sys.drift.eval(x);
                          const Vec grad = gradient_at(cost, x);
                          for (int i = 0; i < sys.num_inputs(); ++i) {
                              if (gammas[i] == 0.0) continue;
                              const Vec fi = sys.inputs[i].eval(x);
                              out -= gammas[i] * fi.dot(grad) * fi;
                          }
                          return out;
                      },
                      nullptr};
    return {std::move(field), AveragedSystem::Source::es_closed_form};
}

namespace {

// gamma * g(J(x)) * f(x) with the product-rule Jacobian when every part is
// analytic
VectorField scaled_gain_field(const VectorField& f, const ScalarField& cost,
                              std::function<double(double)> gain,
                              std::function<double(double)> dgain, double scale) {
    VectorField out;
    out.dim_in = f.dim_in;
    out.dim_out = f.dim_out;
    out.eval = [f, cost, gain, scale](const Vec& x) {
        return Vec(scale * gain(cost.eval(x)) * f.eval(x));
    };
    if (f.has_jacobian() && cost.has_grad() && dgain) {
        out.jac = [f, cost, gain, dgain, scale](const Vec& x) {
            const double j = cost.eval(x);
            const Vec fx = f.eval(x);
            const Vec grad = cost.grad(x);
            return Mat(scale * (fx * (dgain(j) * grad).transpose() + gain(j) * f.jac(x)));
        };
    }
    return out;
}

}  // namespace

InputAffineSystem effective_bracket_system(const InputAffineSystem& sys,
                                           const ScalarField& cost,
                                           const EsControllerParams& params) {
    validate_system(sys);
    const int m = sys.num_inputs();
    require(params.channels() == m, "effective_bracket_system: channel count mismatch");
    InputAffineSystem eff;
    eff.drift = sys.drift;
    eff.y_dim = sys.y_dim;
    eff.z_dim = sys.z_dim;
    eff.inputs.reserve(2 * m);
    for (int i = 0; i < m; ++i) {
        const auto& pair = params.gains[i];
        eff.inputs.push_back(
            scaled_gain_field(sys.inputs[i], cost, pair.g, pair.dg, params.gamma_outer[i]));
    }
    for (int i = 0; i < m; ++i) {
        const auto& pair = params.gains[i];
        eff.inputs.push_back(scaled_gain_field(sys.inputs[i], cost, pair.g_pair, pair.dg_pair,
                                               params.gamma_outer[i]));
    }
    return eff;
}

Vec effective_gammas(const EsControllerParams& params) {
    const int m = params.channels();
    require(static_cast<int>(params.nu_pairs.size()) == m,
            "effective_gammas: params carry no nu pairing values");
    Vec out(m);
    for (int i = 0; i < m; ++i) {
        out[i] = params.gains[i].gamma * params.gamma_outer[i] * params.gamma_outer[i] *
                 params.nu_pairs[i];
    }
    return out;
}

double averaged_equivalence_residual(const InputAffineSystem& sys, const ScalarField& cost,
                                     const EsControllerParams& params,
                                     std::span<const Vec> grid) {
    const InputAffineSystem eff = effective_bracket_system(sys, cost, params);
    const NuMatrix nu = nu_matrix(params.dither);
    const AveragedSystem bracket = lie_bracket_system(eff, nu);
    const AveragedSystem closed = es_averaged_field(sys, cost, effective_gammas(params));
    double sup = 0.0;
    for (const Vec& x : grid) {
        sup = std::max(sup, (bracket.field.eval(x) - closed.field.eval(x)).norm());
    }
    return sup;
}

}  // namespace pes
