#include "pes/util.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace pes {

double van_der_corput(std::size_t k, unsigned base) {
    double q = 0.0;
    double denom = 1.0;
    while (k > 0) {
        denom *= base;
        q += static_cast<double>(k % base) / denom;
        k /= base;
    }
    return q;
}

namespace {
constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
}

std::vector<Vec> halton_points(std::size_t count, int dim, std::size_t skip) {
    require(dim >= 1 && dim <= 10, "halton_points: dimension out of range");
    std::vector<Vec> pts;
    pts.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Vec p(dim);
        for (int d = 0; d < dim; ++d) p[d] = van_der_corput(k + skip, kPrimes[d]);
        pts.push_back(std::move(p));
    }
    return pts;
}

std::vector<Vec> ball_samples(const Vec& center, double delta, std::size_t count) {
    const int n = static_cast<int>(center.size());
    std::vector<Vec> out;
    for (int i = 0; i < n && out.size() < count; ++i) {
        Vec p = center;
        p[i] += delta;
        out.push_back(p);
        if (out.size() == count) break;
        p[i] = center[i] - delta;
        out.push_back(p);
    }
    // fill with scaled Halton cube points rejected to the ball
    std::size_t k = 1;
    while (out.size() < count) {
        Vec q(n);
        for (int d = 0; d < n; ++d) q[d] = 2.0 * van_der_corput(k, kPrimes[d]) - 1.0;
        ++k;
        if (q.norm() > 1.0) continue;
        out.push_back(center + delta * q);
    }
    return out;
}

std::vector<double> isotonic_increasing(std::span<const double> values) {
    // pool-adjacent-violators with block merging
    struct Block {
        double sum;
        std::size_t count;
    };
    std::vector<Block> blocks;
    blocks.reserve(values.size());
    for (double v : values) {
        blocks.push_back({v, 1});
        while (blocks.size() >= 2) {
            auto& prev = blocks[blocks.size() - 2];
            auto& last = blocks.back();
            if (prev.sum / prev.count <= last.sum / last.count) break;
            prev.sum += last.sum;
            prev.count += last.count;
            blocks.pop_back();
        }
    }
    std::vector<double> fit;
    fit.reserve(values.size());
    for (const auto& b : blocks) {
        const double mean = b.sum / static_cast<double>(b.count);
        for (std::size_t i = 0; i < b.count; ++i) fit.push_back(mean);
    }
    return fit;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "log_log_slope: need matched samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0 && y[i] > 0, "log_log_slope: data must be positive");
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<std::size_t>(workers, n));
    pool.reserve(spawn);
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PES_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace pes
