// Waveform augmentation: phase-vocoder time stretch, sinc-resampled pitch
// shift, and the dataset expansion loop.
#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "vpbox/common.hpp"
#include "vpbox/dsp/fft.hpp"

namespace vpbox::augment {

struct AugmentConfig {
    double pitch_semitone_min = -1.5;
    double pitch_semitone_max = 1.5;
    double stretch_factor_min = 0.8;
    double stretch_factor_max = 1.2;
    int iterations = 10;
    uint64_t rng_seed = 0;
};

namespace detail {

constexpr double kPi = 3.141592653589793238462643;

inline double wrap_phase(double p) {
    p = std::fmod(p + kPi, 2.0 * kPi);
    if (p < 0.0) p += 2.0 * kPi;
    return p - kPi;
}

// Linear-interpolation fallback for inputs too short for a vocoder window.
// It warps pitch along with duration, acceptable for sub-centisecond scraps.
inline std::vector<float> stretch_linear(std::span<const float> x, size_t out_len) {
    std::vector<float> out(out_len);
    if (x.size() == 1) {
        for (auto& v : out) v = x[0];
        return out;
    }
    const double step = static_cast<double>(x.size() - 1) / std::max<size_t>(out_len - 1, 1);
    for (size_t n = 0; n < out_len; ++n) {
        const double t = static_cast<double>(n) * step;
        const size_t i = std::min(static_cast<size_t>(t), x.size() - 2);
        const double frac = t - static_cast<double>(i);
        out[n] = static_cast<float>((1.0 - frac) * x[i] + frac * x[i + 1]);
    }
    return out;
}

}  // namespace detail

// Phase-vocoder time stretch (Hann analysis/synthesis, 75% overlap).
// factor is a speed ratio: the output has round(len / factor) samples and the
// same pitch content.
inline std::vector<float> time_stretch(std::span<const float> x, double factor) {
    if (factor < 0.5 || factor > 2.0) throw ConfigError("time_stretch: factor outside [0.5, 2.0]");
    if (x.empty()) throw NumericError("time_stretch: empty waveform");
    const size_t target_len = std::max<size_t>(1, static_cast<size_t>(std::llround(
                                                      static_cast<double>(x.size()) / factor)));
    if (factor == 1.0) return std::vector<float>(x.begin(), x.end());

    // Window: largest power of two <= len/2, capped at 1024.
    size_t n = 1024;
    while (n > 64 && n * 2 > x.size()) n >>= 1;
    if (n * 2 > x.size()) return detail::stretch_linear(x, target_len);
    const size_t hop_syn = n / 4;
    const double hop_ana = static_cast<double>(hop_syn) * factor;
    const size_t n_bins = n / 2 + 1;
    const auto window = dsp::hann_window(n);

    const size_t n_frames =
        target_len > n ? (target_len - n + hop_syn - 1) / hop_syn + 2 : 2;
    std::vector<float> out((n_frames - 1) * hop_syn + n, 0.0f);
    std::vector<double> norm(out.size(), 0.0);

    std::vector<double> phase_acc(n_bins, 0.0), prev_phase(n_bins, 0.0);
    std::vector<std::complex<double>> buf(n);
    const size_t max_pos = x.size() - n;
    long prev_pos = -1;

    for (size_t i = 0; i < n_frames; ++i) {
        const size_t pos = std::min(static_cast<size_t>(std::llround(static_cast<double>(i) * hop_ana)),
                                    max_pos);
        for (size_t j = 0; j < n; ++j) buf[j] = static_cast<double>(x[pos + j]) * window[j];
        dsp::fft(buf);

        if (i == 0) {
            for (size_t k = 0; k < n_bins; ++k) phase_acc[k] = std::arg(buf[k]);
        } else {
            const double dt = static_cast<double>(pos) - static_cast<double>(prev_pos);
            for (size_t k = 0; k < n_bins; ++k) {
                const double omega = 2.0 * detail::kPi * static_cast<double>(k) / static_cast<double>(n);
                const double expected = omega * dt;
                const double dev = detail::wrap_phase(std::arg(buf[k]) - prev_phase[k] - expected);
                const double true_freq = dt > 0.0 ? omega + dev / dt : omega;
                phase_acc[k] += true_freq * static_cast<double>(hop_syn);
            }
        }
        for (size_t k = 0; k < n_bins; ++k) prev_phase[k] = std::arg(buf[k]);
        prev_pos = static_cast<long>(pos);

        std::vector<std::complex<double>> syn(n);
        for (size_t k = 0; k < n_bins; ++k) {
            const std::complex<double> v = std::polar(std::abs(buf[k]), phase_acc[k]);
            syn[k] = v;
            if (k > 0 && k < n / 2) syn[n - k] = std::conj(v);
        }
        dsp::fft(syn, /*inverse=*/true);

        const size_t off = i * hop_syn;
        for (size_t j = 0; j < n; ++j) {
            out[off + j] += static_cast<float>(syn[j].real() * window[j]);
            norm[off + j] += window[j] * window[j];
        }
    }
    for (size_t j = 0; j < out.size(); ++j)
        if (norm[j] > 1e-9) out[j] = static_cast<float>(out[j] / norm[j]);
    out.resize(target_len, 0.0f);
    return out;
}

// Windowed-sinc resampler: out[m] = x(m * ratio). ratio > 1 compresses
// (decimates) and lowpasses at the new Nyquist first.
inline std::vector<float> resample(std::span<const float> x, double ratio) {
    if (ratio <= 0.0) throw ConfigError("resample: ratio must be positive");
    if (x.empty()) throw NumericError("resample: empty waveform");
    const size_t out_len =
        std::max<size_t>(1, static_cast<size_t>(std::llround(static_cast<double>(x.size()) / ratio)));
    const double cutoff = std::min(1.0, 1.0 / ratio);
    const int half_width = 32;
    std::vector<float> out(out_len);
    for (size_t m = 0; m < out_len; ++m) {
        const double t = static_cast<double>(m) * ratio;
        const long lo = static_cast<long>(std::ceil(t)) - half_width;
        const long hi = static_cast<long>(std::floor(t)) + half_width;
        double acc = 0.0;
        for (long k = std::max(0L, lo); k <= std::min(static_cast<long>(x.size()) - 1, hi); ++k) {
            const double d = t - static_cast<double>(k);
            double kern;
            if (std::fabs(d) < 1e-12) {
                kern = cutoff;
            } else {
                const double a = detail::kPi * cutoff * d;
                kern = cutoff * std::sin(a) / a;
            }
            // Hann window over the kernel support.
            kern *= 0.5 + 0.5 * std::cos(detail::kPi * d / (half_width + 1));
            acc += kern * static_cast<double>(x[k]);
        }
        out[m] = static_cast<float>(acc);
    }
    return out;
}

// Pitch shift by the given semitone offset: stretch to len * 2^(s/12), then
// resample back to the original duration, multiplying frequencies by 2^(s/12).
inline std::vector<float> pitch_shift(std::span<const float> x, double semitones) {
    if (std::fabs(semitones) > 12.0) throw ConfigError("pitch_shift: |semitones| must be <= 12");
    if (x.empty()) throw NumericError("pitch_shift: empty waveform");
    if (semitones == 0.0) return std::vector<float>(x.begin(), x.end());
    const double ratio = std::pow(2.0, semitones / 12.0);
    auto stretched = time_stretch(x, 1.0 / ratio);
    auto shifted = resample(stretched, ratio);
    shifted.resize(x.size(), 0.0f);
    return shifted;
}

// One random draw: pitch shift and time stretch applied in random order.
inline std::vector<float> augment_boxeme(std::span<const float> x, const AugmentConfig& cfg,
                                         Rng& rng) {
    const double semitones = rng.uniform(cfg.pitch_semitone_min, cfg.pitch_semitone_max);
    const double factor = rng.uniform(cfg.stretch_factor_min, cfg.stretch_factor_max);
    const bool pitch_first = rng.next_u64() & 1;
    if (pitch_first) {
        auto y = pitch_shift(x, semitones);
        return time_stretch(y, factor);
    }
    auto y = time_stretch(x, factor);
    return pitch_shift(y, semitones);
}

// Expands a list of waveforms to (iterations + 1) * N entries: the originals
// first, then one block per iteration. Each copy's RNG stream is derived from
// (source index, iteration), so the result is independent of evaluation order.
template <typename Item, typename GetWave, typename SetWave>
void augment_items(std::vector<Item>& items, const AugmentConfig& cfg, GetWave get_wave,
                   SetWave set_wave, int threads = 1) {
    const size_t n = items.size();
    const Rng master(cfg.rng_seed);
    std::vector<Item> copies;
    copies.reserve(n * static_cast<size_t>(cfg.iterations));
    for (int it = 1; it <= cfg.iterations; ++it)
        for (size_t i = 0; i < n; ++i) copies.push_back(items[i]);
    parallel_for(copies.size(), threads, [&](size_t j) {
        const size_t i = j % n;
        const int it = static_cast<int>(j / n) + 1;
        Rng rng = master.child(i, static_cast<uint64_t>(it));
        set_wave(copies[j], augment_boxeme(get_wave(items[i]), cfg, rng), i);
    });
    for (auto& c : copies) items.push_back(std::move(c));
}

}  // namespace vpbox::augment
