#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace lobvol {

// Nearest-rank quantile on an already sorted sample: element at 1-based rank
// ceil(q/100 * n), clamped into [1, n]. q in (0, 100].
double nearest_rank(std::span<const double> sorted, double q);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r2 = 0.0;
    double rss = 0.0;
    std::size_t n = 0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Central equal-tailed quantile interval of Binomial(n, p) at the given level:
// [k_lo, k_hi] with P(X < k_lo) <= (1-level)/2 and P(X > k_hi) <= (1-level)/2.
struct BinomialBand {
    std::uint64_t k_lo = 0;
    std::uint64_t k_hi = 0;
};
BinomialBand binomial_band(std::uint64_t n, double p, double level);

// FNV-1a 64-bit over a byte range (manifest content fingerprints).
std::uint64_t fnv1a64(std::string_view bytes);

// Runs fn(begin, end) over [0, n) split into contiguous chunks, one chunk per
// worker. max_threads <= 1 runs inline. Results must not depend on the split.
void parallel_for(std::size_t n, unsigned max_threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

// Worker cap from the LOBVOL_THREADS environment variable, defaulting to
// hardware concurrency.
unsigned default_thread_cap();

}  // namespace lobvol
