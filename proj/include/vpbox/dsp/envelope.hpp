// RMS energy envelope and the four envelope descriptors used by the timbre
// feature set.
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "vpbox/common.hpp"

namespace vpbox::dsp {

// RMS over consecutive non-overlapping hop-length windows (the last window
// may be partial). One envelope sample every hop_samples.
inline std::vector<double> rms_envelope(std::span<const float> x, int hop_samples) {
    if (x.empty()) throw NumericError("rms_envelope: empty waveform");
    const size_t hop = static_cast<size_t>(hop_samples);
    const size_t n_frames = (x.size() + hop - 1) / hop;
    std::vector<double> env(n_frames);
    for (size_t i = 0; i < n_frames; ++i) {
        const size_t start = i * hop;
        const size_t end = std::min(x.size(), start + hop);
        double acc = 0.0;
        for (size_t j = start; j < end; ++j) acc += static_cast<double>(x[j]) * x[j];
        env[i] = std::sqrt(acc / static_cast<double>(end - start));
    }
    return env;
}

struct EnvelopeDescriptors {
    double mean_derivative_after_max = 0.0;  // per-frame units
    double max_derivative_before_max = 0.0;
    double flatness = 0.0;        // geometric mean / arithmetic mean; 0 for silence
    double centroid_ratio = 0.0;  // energy-weighted mean time / total duration
};

inline EnvelopeDescriptors envelope_descriptors(std::span<const float> x, int hop_samples,
                                                int sample_rate) {
    const auto env = rms_envelope(x, hop_samples);
    const size_t n = env.size();
    EnvelopeDescriptors d;

    size_t imax = 0;
    double vmax = env[0], total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (env[i] > vmax) {
            vmax = env[i];
            imax = i;
        }
        total += env[i];
    }
    if (vmax == 0.0) return d;  // all-silent convention: everything 0

    if (imax + 1 < n)
        d.mean_derivative_after_max = (env[n - 1] - env[imax]) / static_cast<double>(n - 1 - imax);
    for (size_t i = 0; i + 1 <= imax && imax > 0; ++i)
        d.max_derivative_before_max = std::max(d.max_derivative_before_max, env[i + 1] - env[i]);

    double log_sum = 0.0;
    bool has_zero = false;
    for (double v : env) {
        if (v <= 0.0) {
            has_zero = true;
            break;
        }
        log_sum += std::log(v);
    }
    const double arith = total / static_cast<double>(n);
    d.flatness = has_zero ? 0.0 : std::exp(log_sum / static_cast<double>(n)) / arith;

    const double hop_s = static_cast<double>(hop_samples) / sample_rate;
    const double duration_s = static_cast<double>(x.size()) / sample_rate;
    double energy = 0.0, weighted_t = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double e = env[i] * env[i];
        energy += e;
        weighted_t += e * (static_cast<double>(i) + 0.5) * hop_s;
    }
    if (energy > 0.0 && duration_s > 0.0) d.centroid_ratio = weighted_t / energy / duration_s;
    return d;
}

}  // namespace vpbox::dsp
