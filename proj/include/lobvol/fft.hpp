#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace lobvol {

// In-place iterative radix-2 transform; data.size() must be a power of two.
// inverse applies the conjugate transform and the 1/n factor.
void fft(std::vector<std::complex<double>>& data, bool inverse);

std::size_t next_pow2(std::size_t n);

}  // namespace lobvol
