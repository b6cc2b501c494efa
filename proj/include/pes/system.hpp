#pragma once

#include "pes/types.hpp"
#include "pes/vectorfield.hpp"

#include <functional>
#include <vector>

namespace pes {

/// Scalar cost or Lyapunov function with optional analytic gradient.
struct ScalarField {
    int dim = 0;
    std::function<double(const Vec&)> eval;
    std::function<Vec(const Vec&)> grad;  // optional; empty means finite differences

    [[nodiscard]] bool has_grad() const { return static_cast<bool>(grad); }
};

/// Gradient, analytic when available, else central differences with the same
/// step policy as jacobian_at.
Vec gradient_at(const ScalarField& f, const Vec& x, double step_scale = 1e-5);

/// Control-affine dynamics dx/dt = f0(x) + sum_i f_i(x) u_i with the state
/// split x = (y, z), y the first y_dim coordinates.
struct InputAffineSystem {
    VectorField drift;                 // f0
    std::vector<VectorField> inputs;   // f_1 .. f_m
    int y_dim = 0;
    int z_dim = 0;

    [[nodiscard]] int dim() const { return y_dim + z_dim; }
    [[nodiscard]] int num_inputs() const { return static_cast<int>(inputs.size()); }
};

/// f0(x) + sum_i f_i(x) u_i for a frozen control vector.
Vec eval_with_controls(const InputAffineSystem& sys, const Vec& x, const Vec& u);

void validate_system(const InputAffineSystem& sys);

}  // namespace pes
