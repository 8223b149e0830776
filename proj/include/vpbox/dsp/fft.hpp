// Iterative radix-2 complex FFT. Power-of-two sizes only, which is all the
// spectrogram and phase-vocoder paths ever use.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "vpbox/common.hpp"

namespace vpbox::dsp {

inline bool is_power_of_two(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline size_t next_power_of_two(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place decimation-in-time FFT. inverse=true applies the conjugate
// transform and the 1/n scale.
inline void fft(std::vector<std::complex<double>>& a, bool inverse = false) {
    const size_t n = a.size();
    if (!is_power_of_two(n)) throw NumericError("fft: size must be a power of two");
    if (n == 1) return;

    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double base = (inverse ? 2.0 : -2.0) * 3.141592653589793238462643;
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = base / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= scale;
    }
}

// Magnitude spectrum of a real frame, zero-padded to n_fft. Returns n_fft/2+1 bins.
inline std::vector<double> magnitude_spectrum(const std::vector<double>& frame, size_t n_fft) {
    if (frame.size() > n_fft) throw NumericError("magnitude_spectrum: frame longer than n_fft");
    std::vector<std::complex<double>> buf(n_fft);
    for (size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
    fft(buf);
    std::vector<double> mag(n_fft / 2 + 1);
    for (size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(buf[k]);
    return mag;
}

// Periodic Hann window.
inline std::vector<double> hann_window(size_t n) {
    std::vector<double> w(n);
    for (size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * 3.141592653589793238462643 * static_cast<double>(i) /
                                    static_cast<double>(n));
    return w;
}

}  // namespace vpbox::dsp
