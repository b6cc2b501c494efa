#pragma once

#include "pes/types.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pes {

/// k-th element (1-based) of the van der Corput sequence in the given base.
double van_der_corput(std::size_t k, unsigned base);

/// Deterministic low-discrepancy points in [0,1]^dim (Halton, prime bases).
std::vector<Vec> halton_points(std::size_t count, int dim, std::size_t skip = 1);

/// Points on and inside the delta-ball around center: the 2n axis points on
/// the boundary plus Halton-filled interior, `count` in total (at least the
/// boundary points).
std::vector<Vec> ball_samples(const Vec& center, double delta, std::size_t count);

/// Pool-adjacent-violators fit: the closest non-decreasing sequence to values
/// in least squares.
std::vector<double> isotonic_increasing(std::span<const double> values);

/// Least-squares slope of log(y) against log(x); x and y must be positive.
double log_log_slope(std::span<const double> x, std::span<const double> y);

/// Run fn(i) for i in [0, n) on up to `workers` threads. Exceptions propagate
/// (first one wins); results must be written to pre-sized slots by index.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// Worker count resolution: explicit flag > PES_WORKERS env > hardware.
int resolve_workers(int requested);

}  // namespace pes
