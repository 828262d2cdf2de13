#pragma once

#include <complex>
#include <span>
#include <vector>

namespace manakov {

/// In-place radix-2 FFT for the split-step scheme. Sizes are powers of two
/// by construction (the scheme rejects other grids). Pure functions, no
/// cached state: results are bit-reproducible and calls are thread-safe.
namespace spectral {

bool is_power_of_two(int n);

/// Forward transform: F_m = sum_j f_j exp(-2 pi i j m / n). No scaling.
void fft(std::span<std::complex<double>> data);

/// Inverse transform including the 1/n factor.
void ifft(std::span<std::complex<double>> data);

/// Signed mode index for FFT bin m of an n-point transform:
/// m for m < n/2, m - n otherwise.
int mode_index(int m, int n);

}  // namespace spectral

}  // namespace manakov
