#pragma once

#include <cstdint>

namespace lobvol {

// Philox4x32-10 counter-based generator (Salmon et al. 2011 constants).
// Every draw is a pure function of (seed, stream, index), so a sequence is
// reproducible across runs, platforms and thread partitions: parallel code
// carves up index ranges instead of sharing mutable state.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    // Random access.
    std::uint64_t u64_at(std::uint64_t index) const;
    // Uniform on (0,1), strictly inside: (k + 0.5) * 2^-53.
    double uniform_at(std::uint64_t index) const;
    // Standard normal by inverse-CDF transform of uniform_at(index).
    double normal_at(std::uint64_t index) const;
    // Uniform integer in [0, bound).
    std::uint64_t below_at(std::uint64_t index, std::uint64_t bound) const;

    // Sequential convenience (advances an internal cursor).
    std::uint64_t next_u64() { return u64_at(cursor_++); }
    double next_uniform() { return uniform_at(cursor_++); }
    double next_normal() { return normal_at(cursor_++); }
    std::uint64_t next_below(std::uint64_t bound) { return below_at(cursor_++, bound); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t cursor_ = 0;
};

// Raw Philox4x32-10 block function: 128-bit counter and 64-bit key in, four
// 32-bit words out.
struct Philox4x32Block {
    std::uint32_t v[4];
};
Philox4x32Block philox4x32(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                           std::uint32_t c3, std::uint32_t k0, std::uint32_t k1);

// High-precision inverse of the standard normal CDF (Acklam's rational
// approximation polished with one Halley step; good to ~1e-15 relative).
double normal_quantile(double p);

// Standard normal CDF and its logarithm (stable far into the lower tail).
double normal_cdf(double x);
double log_normal_cdf(double x);

}  // namespace lobvol
