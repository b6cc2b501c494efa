#include "pes/dither.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pes {

namespace {

int even_points(int n_points) {
    require(n_points >= 64, "quadrature: need at least 64 points");
    return n_points % 2 == 0 ? n_points : n_points + 1;
}

double simpson_unit(const std::function<double(double)>& f, int n) {
    const double h = 1.0 / n;
    double acc = f(0.0) + f(1.0);
    for (int k = 1; k < n; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * f(k * h);
    return acc * h / 3.0;
}

}  // namespace

double compute_nu(const DitherSignal& w_i, const DitherSignal& w_j, int n_points) {
    const int n = even_points(n_points);
    const double h = 1.0 / n;
    // cumulative antiderivative of w_i at the outer nodes, one Simpson panel
    // (with midpoint) per step
    std::vector<double> inner(n + 1, 0.0);
    double wi_left = w_i.shape(0.0);
    for (int k = 1; k <= n; ++k) {
        const double mid = w_i.shape((k - 0.5) * h);
        const double right = w_i.shape(static_cast<double>(k) * h);
        inner[k] = inner[k - 1] + h / 6.0 * (wi_left + 4.0 * mid + right);
        wi_left = right;
    }
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double theta = k * h;
        const double val = w_j.shape(theta) * inner[k];
        if (!std::isfinite(val)) {
            throw NumericError("compute_nu: non-finite signal value at theta = " +
                               std::to_string(theta));
        }
        const double weight = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        acc += weight * val;
    }
    return acc * h / 3.0;
}

double check_zero_mean(const DitherSignal& w, int n_points) {
    const int n = even_points(n_points);
    return std::abs(simpson_unit(w.shape, n));
}

double sup_bound(std::span<const DitherSignal> signals, int n_points) {
    require(!signals.empty(), "sup_bound: empty signal list");
    const int n = even_points(n_points);
    double sup = 0.0;
    for (const auto& w : signals) {
        for (int k = 0; k <= n; ++k) {
            sup = std::max(sup, std::abs(w.shape(static_cast<double>(k) / n)));
        }
    }
    return sup;
}

NuMatrix nu_matrix(std::span<const DitherSignal> signals, int n_points) {
    const int k = static_cast<int>(signals.size());
    Mat values(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            values(i, j) = compute_nu(signals[i], signals[j], n_points);
        }
    }
    return {std::move(values), n_points};
}

std::vector<DitherSignal> quadrature_family(int m, double scale) {
    require(m >= 1, "quadrature_family: need at least one channel");
    std::vector<DitherSignal> signals(2 * m);
    for (int i = 0; i < m; ++i) {
        const double freq = 2.0 * std::numbers::pi * (i + 1);
        const double amp = scale * std::sqrt(std::numbers::pi * (i + 1));
        if (i % 2 == 0) {
            signals[i] = {[amp, freq](double th) { return amp * std::cos(freq * th); }, amp};
            signals[i + m] = {[amp, freq](double th) { return amp * std::sin(freq * th); }, amp};
        } else {
            signals[i] = {[amp, freq](double th) { return amp * std::sin(freq * th); }, amp};
            signals[i + m] = {[amp, freq](double th) { return -amp * std::cos(freq * th); }, amp};
        }
    }
    return signals;
}

bool nu_pattern_ok(const NuMatrix& nu, int m, double tol, Vec* pair_values) {
    if (nu.values.rows() != 2 * m || nu.values.cols() != 2 * m) return false;
    Vec pairs(m);
    for (int i = 0; i < m; ++i) pairs[i] = nu.values(i, i + m);
    const double mean = pairs.mean();
    if (mean <= 10.0 * tol) return false;
    for (int i = 0; i < m; ++i) {
        if (std::abs(pairs[i] - mean) > tol * std::max(1.0, std::abs(mean))) return false;
    }
    for (int i = 0; i < 2 * m; ++i) {
        for (int j = i + 1; j < 2 * m; ++j) {
            if (j == i + m) continue;
            if (std::abs(nu.values(i, j)) > tol) return false;
        }
    }
    if (pair_values) *pair_values = pairs;
    return true;
}

}  // namespace pes
