// Mel spectrogram frontend: HTK-scale triangular filterbank, Hann STFT,
// log compression and per-spectrogram min-max normalization.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "vpbox/common.hpp"
#include "vpbox/dsp/fft.hpp"

namespace vpbox::dsp {

inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

struct StftParams {
    int sample_rate = 44100;
    int frame_ms = 46;  // one of {23, 46, 93}
    int hop_ms = 12;

    int frame_samples() const {
        return static_cast<int>(std::lround(frame_ms * 1e-3 * sample_rate));
    }
    int hop_samples() const { return static_cast<int>(std::lround(hop_ms * 1e-3 * sample_rate)); }
    int n_fft() const { return static_cast<int>(next_power_of_two(frame_samples())); }
};

// Triangular mel filterbank, n_mels x (n_fft/2 + 1), filters equally spaced
// on the mel scale from 0 Hz to sample_rate/2.
class MelFilterbank {
  public:
    MelFilterbank(int n_mels, int sample_rate, int n_fft) : n_mels_(n_mels), n_fft_(n_fft) {
        if (sample_rate <= 0) throw ConfigError("mel filterbank: sample_rate must be positive");
        if (!is_power_of_two(static_cast<size_t>(n_fft)))
            throw ConfigError("mel filterbank: n_fft must be a power of two");
        const int n_bins = n_fft / 2 + 1;
        if (n_mels + 2 > n_bins)
            throw ConfigError("mel filterbank: more mel bands than FFT bins");
        weights_.assign(static_cast<size_t>(n_mels) * n_bins, 0.0);
        edges_hz_.resize(n_mels + 2);
        const double mel_max = hz_to_mel(sample_rate / 2.0);
        for (int i = 0; i < n_mels + 2; ++i)
            edges_hz_[i] = mel_to_hz(mel_max * static_cast<double>(i) / (n_mels + 1));
        for (int m = 0; m < n_mels; ++m) {
            const double f0 = edges_hz_[m], f1 = edges_hz_[m + 1], f2 = edges_hz_[m + 2];
            for (int k = 0; k < n_bins; ++k) {
                const double fk = static_cast<double>(k) * sample_rate / n_fft;
                double w = 0.0;
                if (fk > f0 && fk <= f1)
                    w = (fk - f0) / (f1 - f0);
                else if (fk > f1 && fk < f2)
                    w = (f2 - fk) / (f2 - f1);
                weights_[static_cast<size_t>(m) * n_bins + k] = w;
            }
        }
    }

    int n_mels() const { return n_mels_; }
    int n_bins() const { return n_fft_ / 2 + 1; }
    double center_hz(int m) const { return edges_hz_[m + 1]; }

    // filterbank * magnitude spectrum
    std::vector<double> apply(const std::vector<double>& spectrum) const {
        const int n_bins = this->n_bins();
        if (spectrum.size() != static_cast<size_t>(n_bins))
            throw NumericError("mel filterbank: spectrum size mismatch");
        std::vector<double> out(n_mels_, 0.0);
        for (int m = 0; m < n_mels_; ++m) {
            const double* row = weights_.data() + static_cast<size_t>(m) * n_bins;
            double acc = 0.0;
            for (int k = 0; k < n_bins; ++k) acc += row[k] * spectrum[k];
            out[m] = acc;
        }
        return out;
    }

    const std::vector<double>& weights() const { return weights_; }

  private:
    int n_mels_;
    int n_fft_;
    std::vector<double> weights_;  // row-major n_mels x n_bins
    std::vector<double> edges_hz_;
};

struct MelSpec {
    static constexpr int kBands = 64;
    static constexpr int kFrames = 48;
    std::vector<double> values;  // row-major kBands x kFrames, in [0, 1]
    int frame_ms = 46;

    double at(int band, int frame) const { return values[static_cast<size_t>(band) * kFrames + frame]; }
};

namespace detail {

// Frame centered at sample `center`; out-of-range samples read as zero.
inline std::vector<double> windowed_frame(std::span<const float> x, long center, int frame_len,
                                          const std::vector<double>& window, double scale) {
    std::vector<double> frame(frame_len, 0.0);
    const long start = center - frame_len / 2;
    const long n = static_cast<long>(x.size());
    for (int i = 0; i < frame_len; ++i) {
        const long idx = start + i;
        if (idx >= 0 && idx < n) frame[i] = static_cast<double>(x[idx]) * scale * window[i];
    }
    return frame;
}

}  // namespace detail

// Raw log-mel frames (no min-max normalization): columns are frames centered
// at 0, hop, 2*hop, ...; used by the MFCC path. n_frames <= 0 means "cover
// the waveform", i.e. floor((len-1)/hop) + 1 frames.
inline std::vector<std::vector<double>> log_mel_frames(std::span<const float> x,
                                                       const StftParams& params,
                                                       const MelFilterbank& fb, int n_frames = -1,
                                                       bool peak_normalize = false) {
    if (x.empty()) throw NumericError("log_mel_frames: empty waveform");
    const int frame_len = params.frame_samples();
    const int hop = params.hop_samples();
    const size_t n_fft = static_cast<size_t>(params.n_fft());
    if (n_frames <= 0) n_frames = static_cast<int>((x.size() - 1) / hop) + 1;

    double scale = 1.0;
    if (peak_normalize) {
        double peak = 0.0;
        for (float v : x) peak = std::max(peak, std::fabs(static_cast<double>(v)));
        if (peak > 0.0) scale = 1.0 / peak;
    }

    const auto window = hann_window(frame_len);
    std::vector<std::vector<double>> frames;
    frames.reserve(n_frames);
    for (int t = 0; t < n_frames; ++t) {
        auto frame = detail::windowed_frame(x, static_cast<long>(t) * hop, frame_len, window, scale);
        auto spectrum = magnitude_spectrum(frame, n_fft);
        auto mel = fb.apply(spectrum);
        for (double& v : mel) v = std::log(v + 1e-4);
        frames.push_back(std::move(mel));
    }
    return frames;
}

// The 64x48 network input. The waveform is peak normalized before the STFT so
// the output is invariant to global gain; shorter inputs are implicitly
// zero padded and longer ones truncated at 48 frames. A constant (all zero)
// input maps to an all-zero grid.
inline MelSpec mel_spectrogram(std::span<const float> x, const StftParams& params,
                               const MelFilterbank& fb) {
    if (x.empty()) throw NumericError("mel_spectrogram: empty waveform");
    if (fb.n_mels() != MelSpec::kBands) throw ConfigError("mel_spectrogram: filterbank must have 64 bands");
    auto frames = log_mel_frames(x, params, fb, MelSpec::kFrames, /*peak_normalize=*/true);

    MelSpec spec;
    spec.frame_ms = params.frame_ms;
    spec.values.resize(static_cast<size_t>(MelSpec::kBands) * MelSpec::kFrames);
    double lo = frames[0][0], hi = frames[0][0];
    for (const auto& f : frames)
        for (double v : f) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double range = hi - lo;
    for (int m = 0; m < MelSpec::kBands; ++m)
        for (int t = 0; t < MelSpec::kFrames; ++t)
            spec.values[static_cast<size_t>(m) * MelSpec::kFrames + t] =
                range > 0.0 ? (frames[t][m] - lo) / range : 0.0;
    return spec;
}

}  // namespace vpbox::dsp
