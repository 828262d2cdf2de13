#include "manakov/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace manakov::spectral {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

namespace {

void transform(std::span<std::complex<double>> a, double sign) {
    const std::size_t n = a.size();
    if (!is_power_of_two(static_cast<int>(n)))
        throw std::invalid_argument("fft: size must be a power of two");

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // Twiddles come straight from cos/sin per index: a multiplicative
    // recurrence would accumulate enough roundoff to show up as mass drift
    // over long runs.
    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(n);
        twiddle[j] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> w = twiddle[j * stride];
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

}  // namespace

void fft(std::span<std::complex<double>> data) { transform(data, -1.0); }

void ifft(std::span<std::complex<double>> data) {
    transform(data, +1.0);
    const double inv = 1.0 / static_cast<double>(data.size());
    for (auto& x : data) x *= inv;
}

int mode_index(int m, int n) { return m < n / 2 ? m : m - n; }

}  // namespace manakov::spectral
