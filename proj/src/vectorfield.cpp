#include "pes/vectorfield.hpp"

#include <cmath>
#include <string>

namespace pes {

VectorField zero_field(int dim) {
    return {dim, dim, [dim](const Vec&) { return Vec(Vec::Zero(dim)); },
            [dim](const Vec&) { return Mat(Mat::Zero(dim, dim)); }};
}

VectorField constant_field(const Vec& value, int dim_in) {
    const int dim_out = static_cast<int>(value.size());
    return {dim_in, dim_out, [value](const Vec&) { return value; },
            [dim_out, dim_in](const Vec&) { return Mat(Mat::Zero(dim_out, dim_in)); }};
}

VectorField linear_field(const Mat& a) {
    return {static_cast<int>(a.cols()), static_cast<int>(a.rows()),
            [a](const Vec& x) { return Vec(a * x); }, [a](const Vec&) { return a; }};
}

TimeVaryingField autonomous(const VectorField& f) {
    return {f.dim_in, [f](double, const Vec& x) { return f.eval(x); }};
}

Vec eval_field(const VectorField& field, const Vec& x) {
    require(static_cast<int>(x.size()) == field.dim_in,
            "eval_field: state has length " + std::to_string(x.size()) + ", field expects " +
                std::to_string(field.dim_in));
    Vec out = field.eval(x);
    require(static_cast<int>(out.size()) == field.dim_out,
            "eval_field: field returned wrong output length");
    return out;
}

Jacobian jacobian_at(const VectorField& field, const Vec& x, double step_scale) {
    require(static_cast<int>(x.size()) == field.dim_in, "jacobian_at: dimension mismatch");
    if (field.has_jacobian()) {
        Mat m = field.jac(x);
        require(m.rows() == field.dim_out && m.cols() == field.dim_in,
                "jacobian_at: analytic Jacobian has wrong shape");
        return {std::move(m), x};
    }
    Mat m(field.dim_out, field.dim_in);
    Vec xp = x;
    Vec xm = x;
    for (int k = 0; k < field.dim_in; ++k) {
        const double h = step_scale * std::max(1.0, std::abs(x[k]));
        xp[k] = x[k] + h;
        xm[k] = x[k] - h;
        const Vec fp = field.eval(xp);
        const Vec fm = field.eval(xm);
        if (!fp.allFinite() || !fm.allFinite()) {
            throw NumericError("jacobian_at: non-finite evaluation while differencing coordinate " +
                               std::to_string(k));
        }
        m.col(k) = (fp - fm) / (2.0 * h);
        xp[k] = x[k];
        xm[k] = x[k];
    }
    return {std::move(m), x};
}

Vec lie_derivative(const VectorField& f, const VectorField& g, const Vec& x,
                   double step_scale) {
    require(f.dim_in == g.dim_in && f.dim_in == g.dim_out,
            "lie_derivative: field dimensions disagree");
    return jacobian_at(f, x, step_scale).matrix * g.eval(x);
}

Vec lie_bracket(const VectorField& f, const VectorField& g, const Vec& x,
                double step_scale) {
    return lie_derivative(g, f, x, step_scale) - lie_derivative(f, g, x, step_scale);
}

}  // namespace pes
