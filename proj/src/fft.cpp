#include "lobvol/fft.hpp"

#include <cmath>

#include "lobvol/errors.hpp"

namespace lobvol {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) throw ParameterError("fft: size must be a power of two");

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                // Reseed the twiddle factor periodically to stop drift in the
                // running product on long transforms.
                if ((k & 1023) == 0)
                    w = std::polar(1.0, ang * static_cast<double>(k));
                std::complex<double> u = data[i + k];
                std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        double inv = 1.0 / static_cast<double>(n);
        for (auto& c : data) c *= inv;
    }
}

}  // namespace lobvol
