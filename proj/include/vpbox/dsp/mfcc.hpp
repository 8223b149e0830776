// MFCCs: log-mel frames followed by an orthonormal type-II DCT.
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "vpbox/common.hpp"
#include "vpbox/dsp/mel.hpp"

namespace vpbox::dsp {

// Orthonormal DCT-II matrix, n_out x n_in (applied to one frame at a time).
class DctMatrix {
  public:
    DctMatrix(int n_out, int n_in) : n_out_(n_out), n_in_(n_in) {
        if (n_out > n_in) throw ConfigError("dct: more coefficients than inputs");
        coeffs_.resize(static_cast<size_t>(n_out) * n_in);
        const double pi = 3.141592653589793238462643;
        for (int k = 0; k < n_out; ++k) {
            const double norm = k == 0 ? std::sqrt(1.0 / n_in) : std::sqrt(2.0 / n_in);
            for (int n = 0; n < n_in; ++n)
                coeffs_[static_cast<size_t>(k) * n_in + n] =
                    norm * std::cos(pi * k * (2.0 * n + 1.0) / (2.0 * n_in));
        }
    }

    std::vector<double> apply(const std::vector<double>& frame) const {
        if (frame.size() != static_cast<size_t>(n_in_)) throw NumericError("dct: frame size mismatch");
        std::vector<double> out(n_out_, 0.0);
        for (int k = 0; k < n_out_; ++k) {
            const double* row = coeffs_.data() + static_cast<size_t>(k) * n_in_;
            double acc = 0.0;
            for (int n = 0; n < n_in_; ++n) acc += row[n] * frame[n];
            out[k] = acc;
        }
        return out;
    }

  private:
    int n_out_, n_in_;
    std::vector<double> coeffs_;
};

// Per-frame MFCC matrix (rows = frames, cols = coefficients 0..n_coeffs-1).
// Same frame/hop analysis as the spectrogram path, no min-max normalization.
inline std::vector<std::vector<double>> mfcc(std::span<const float> x, const StftParams& params,
                                             const MelFilterbank& fb, int n_coeffs) {
    if (x.empty()) throw NumericError("mfcc: empty waveform");
    if (n_coeffs > fb.n_mels()) throw ConfigError("mfcc: n_coeffs exceeds mel band count");
    auto frames = log_mel_frames(x, params, fb);
    DctMatrix dct(n_coeffs, fb.n_mels());
    std::vector<std::vector<double>> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(dct.apply(f));
    return out;
}

// First-order frame difference, d[i] = c[i+1] - c[i]. A single-frame input
// yields one all-zero row so downstream means stay defined.
inline std::vector<std::vector<double>> frame_delta(const std::vector<std::vector<double>>& c) {
    if (c.empty()) return {};
    if (c.size() == 1) return {std::vector<double>(c[0].size(), 0.0)};
    std::vector<std::vector<double>> d(c.size() - 1, std::vector<double>(c[0].size()));
    for (size_t i = 0; i + 1 < c.size(); ++i)
        for (size_t j = 0; j < c[0].size(); ++j) d[i][j] = c[i + 1][j] - c[i][j];
    return d;
}

inline std::vector<double> column_means(const std::vector<std::vector<double>>& m) {
    if (m.empty()) return {};
    std::vector<double> out(m[0].size(), 0.0);
    for (const auto& row : m)
        for (size_t j = 0; j < row.size(); ++j) out[j] += row[j];
    for (double& v : out) v /= static_cast<double>(m.size());
    return out;
}

}  // namespace vpbox::dsp
