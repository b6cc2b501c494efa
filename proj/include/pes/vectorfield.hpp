#pragma once

#include "pes/types.hpp"

#include <functional>
#include <utility>

namespace pes {

/// Evaluatable smooth map x -> f(x) with optional analytic Jacobian.
/// Immutable after construction; all operations on it are pure.
struct VectorField {
    int dim_in = 0;
    int dim_out = 0;
    std::function<Vec(const Vec&)> eval;
    std::function<Mat(const Vec&)> jac;  // optional; empty means finite differences

    [[nodiscard]] bool has_jacobian() const { return static_cast<bool>(jac); }
};

/// Jacobian matrix together with the point it was evaluated at.
struct Jacobian {
    Mat matrix;
    Vec point;
};

/// Non-autonomous field (t, x) -> dx/dt.
struct TimeVaryingField {
    int dim = 0;
    std::function<Vec(double, const Vec&)> eval;
};

VectorField zero_field(int dim);
VectorField constant_field(const Vec& value, int dim_in);
VectorField linear_field(const Mat& a);

/// Lift an autonomous field to the time-varying interface.
TimeVaryingField autonomous(const VectorField& f);

Vec eval_field(const VectorField& field, const Vec& x);

/// Analytic Jacobian when the field carries one, otherwise central finite
/// differences with per-coordinate step h_k = step_scale * max(1, |x_k|).
Jacobian jacobian_at(const VectorField& field, const Vec& x, double step_scale = 1e-5);

/// Directional derivative L_g f(x) = (df/dx)(x) g(x).
Vec lie_derivative(const VectorField& f, const VectorField& g, const Vec& x,
                   double step_scale = 1e-5);

/// Lie bracket [f,g](x) = L_f g(x) - L_g f(x) = (dg/dx) f - (df/dx) g.
Vec lie_bracket(const VectorField& f, const VectorField& g, const Vec& x,
                double step_scale = 1e-5);

}  // namespace pes
