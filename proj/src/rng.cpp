#include "lobvol/rng.hpp"

#include <cmath>

namespace lobvol {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;  // golden ratio
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;  // sqrt(3) - 1

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32Block philox4x32(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                           std::uint32_t c3, std::uint32_t k0, std::uint32_t k1) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c0, hi0, lo0);
        mulhilo(kPhiloxM1, c2, hi1, lo1);
        std::uint32_t n0 = hi1 ^ c1 ^ k0;
        std::uint32_t n1 = lo1;
        std::uint32_t n2 = hi0 ^ c3 ^ k1;
        std::uint32_t n3 = lo0;
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return Philox4x32Block{{c0, c1, c2, c3}};
}

std::uint64_t CounterRng::u64_at(std::uint64_t index) const {
    // One Philox block yields two 64-bit outputs; index selects the half.
    std::uint64_t block = index >> 1;
    Philox4x32Block out = philox4x32(
        static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32),
        static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32));
    if (index & 1)
        return (static_cast<std::uint64_t>(out.v[2]) << 32) | out.v[3];
    return (static_cast<std::uint64_t>(out.v[0]) << 32) | out.v[1];
}

double CounterRng::uniform_at(std::uint64_t index) const {
    return (static_cast<double>(u64_at(index) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal_at(std::uint64_t index) const {
    return normal_quantile(uniform_at(index));
}

std::uint64_t CounterRng::below_at(std::uint64_t index, std::uint64_t bound) const {
    // Modulo mapping; bias is < bound/2^64, irrelevant at the bounds used here.
    return u64_at(index) % bound;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double log_normal_cdf(double x) {
    if (x > -37.0) {
        double c = 0.5 * std::erfc(-x * 0.7071067811865475244);
        if (c > 0.0) return std::log(c);
    }
    // Deep lower tail: asymptotic expansion of ln Phi(x), x << 0.
    double x2 = x * x;
    return -0.5 * x2 - std::log(-x) - 0.9189385332046727418
           + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -1e308;
        if (p == 1.0) return 1e308;
        return std::nan("");
    }
    // Acklam's rational approximation.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley refinement step against the exact CDF.
    double e = normal_cdf(x) - p;
    double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

}  // namespace lobvol
