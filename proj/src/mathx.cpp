#include "lobvol/mathx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "lobvol/errors.hpp"

namespace lobvol {

double nearest_rank(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw InsufficientDataError("nearest_rank: empty sample");
    if (!(q > 0.0 && q <= 100.0)) throw ParameterError("nearest_rank: q outside (0,100]");
    std::size_t n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return sorted[rank - 1];
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("fit_line: size mismatch");
    if (x.size() < 2) throw InsufficientDataError("fit_line: need at least 2 points");
    std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw NumericalError("fit_line: degenerate abscissae");

    LineFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - fit.intercept - fit.slope * x[i];
        rss += r * r;
    }
    fit.rss = rss;
    fit.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
    fit.stderr_slope = n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
    return fit;
}

BinomialBand binomial_band(std::uint64_t n, double p, double level) {
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("binomial_band: p outside (0,1)");
    if (!(level > 0.0 && level < 1.0)) throw ParameterError("binomial_band: level outside (0,1)");
    double alpha = (1.0 - level) / 2.0;

    // pmf via lgamma; terms below double range vanish, which cannot move a
    // central quantile.
    double lg_n1 = std::lgamma(static_cast<double>(n) + 1.0);
    double lp = std::log(p);
    double lq = std::log1p(-p);
    auto pmf = [&](std::uint64_t k) {
        double lk = lg_n1 - std::lgamma(static_cast<double>(k) + 1.0) -
                    std::lgamma(static_cast<double>(n - k) + 1.0) +
                    static_cast<double>(k) * lp + static_cast<double>(n - k) * lq;
        return std::exp(lk);
    };

    BinomialBand band;
    double cum = 0.0;
    bool lo_set = false, hi_set = false;
    for (std::uint64_t k = 0; k <= n; ++k) {
        cum += pmf(k);
        if (!lo_set && cum > alpha + 1e-15) {
            band.k_lo = k;
            lo_set = true;
        }
        if (!hi_set && cum >= 1.0 - alpha - 1e-15) {
            band.k_hi = k;
            hi_set = true;
            break;
        }
    }
    if (!hi_set) band.k_hi = n;
    if (!lo_set) band.k_lo = 0;
    return band;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void parallel_for(std::size_t n, unsigned max_threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    unsigned workers = max_threads == 0 ? default_thread_cap() : max_threads;
    workers = std::min<std::size_t>(workers, n);
    if (workers <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

unsigned default_thread_cap() {
    if (const char* env = std::getenv("LOBVOL_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace lobvol
