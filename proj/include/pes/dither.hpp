#pragma once

#include "pes/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace pes {

/// Zero-mean periodic probing signal stored on the unit period: the signal
/// applied at runtime is w(t/eps mod 1), so every quantity derived from the
/// shape (nu coefficients, sup bounds) is eps-independent.
struct DitherSignal {
    std::function<double(double)> shape;  // theta in [0,1] -> w(theta)
    double amplitude_bound = 0.0;
};

/// Averaging coefficient matrix nu_ij; only the strict upper triangle feeds
/// the bracket sum.
struct NuMatrix {
    Mat values;
    int quadrature_points = 0;
};

/// nu_ij = integral over 0<=s<=tau<=1 of w_j(tau) w_i(s), composite Simpson
/// in both layers. The value equals the paper-scale coefficient for any eps.
double compute_nu(const DitherSignal& w_i, const DitherSignal& w_j, int n_points = 1024);

/// |integral of w over one period|; callers assert <= 1e-10 for admissibility.
double check_zero_mean(const DitherSignal& w, int n_points = 1024);

/// Sampled sup of |w_i(theta)| over all signals (the W bound).
double sup_bound(std::span<const DitherSignal> signals, int n_points = 1024);

NuMatrix nu_matrix(std::span<const DitherSignal> signals, int n_points = 1024);

/// Sin/cos quadrature family for m control channels: 2m signals where channel
/// i (1-based) runs at integer frequency i with amplitude scale*sqrt(pi*i).
/// Pairing (i, i+m) then has nu = scale^2/4 and every cross entry vanishes;
/// scale=2 gives the normalized pattern nu_{i,i+m} = 1.
std::vector<DitherSignal> quadrature_family(int m, double scale = 1.0);

/// True when nu has the pairing pattern: nu_{i,i+m} entries within tol of a
/// common positive value and all other strict-upper-triangle entries below
/// tol. On success pair_values receives the m paired coefficients.
bool nu_pattern_ok(const NuMatrix& nu, int m, double tol, Vec* pair_values = nullptr);

}  // namespace pes
