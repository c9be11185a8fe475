#ifndef CSL_FFT_HPP
#define CSL_FFT_HPP

#include <complex>
#include <cstddef>
#include <span>

namespace csl {

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

/// In-place radix-2 complex FFT. Length must be a power of two.
/// The inverse transform applies the 1/n normalization.
void fft(std::span<std::complex<double>> data, bool inverse);

} // namespace csl

#endif
