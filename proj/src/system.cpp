#include "pes/system.hpp"

#include <cmath>
#include <string>

namespace pes {

Vec gradient_at(const ScalarField& f, const Vec& x, double step_scale) {
    require(static_cast<int>(x.size()) == f.dim, "gradient_at: dimension mismatch");
    if (f.has_grad()) return f.grad(x);
    Vec g(f.dim);
    Vec xp = x;
    Vec xm = x;
    for (int k = 0; k < f.dim; ++k) {
        const double h = step_scale * std::max(1.0, std::abs(x[k]));
        xp[k] = x[k] + h;
        xm[k] = x[k] - h;
        g[k] = (f.eval(xp) - f.eval(xm)) / (2.0 * h);
        xp[k] = x[k];
        xm[k] = x[k];
    }
    return g;
}

Vec eval_with_controls(const InputAffineSystem& sys, const Vec& x, const Vec& u) {
    require(static_cast<int>(u.size()) == sys.num_inputs(),
            "eval_with_controls: control has length " + std::to_string(u.size()) +
                ", system has " + std::to_string(sys.num_inputs()) + " inputs");
    Vec dx = sys.drift.eval(x);
    for (int i = 0; i < sys.num_inputs(); ++i) dx += sys.inputs[i].eval(x) * u[i];
    return dx;
}

void validate_system(const InputAffineSystem& sys) {
    const int n = sys.dim();
    require(sys.y_dim >= 0 && sys.z_dim >= 0 && n > 0, "system: bad y/z split");
    require(sys.drift.dim_in == n && sys.drift.dim_out == n, "system: drift dimension mismatch");
    for (const auto& f : sys.inputs) {
        require(f.dim_in == n && f.dim_out == n, "system: input field dimension mismatch");
    }
}

}  // namespace pes
