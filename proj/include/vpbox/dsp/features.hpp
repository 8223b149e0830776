// Hand-crafted descriptors: the 16/32-dimensional timbre vector and the
// 258-entry heuristic feature bank used by the selection baselines.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "vpbox/common.hpp"
#include "vpbox/dsp/envelope.hpp"
#include "vpbox/dsp/fft.hpp"
#include "vpbox/dsp/mel.hpp"
#include "vpbox/dsp/mfcc.hpp"

namespace vpbox::dsp {

struct TimbreVector {
    std::vector<double> values;  // 16 or 32
    std::vector<std::string> names;
};

// dim == 32: mean of MFCC 0..13, mean of their first-order frame difference,
// and the four envelope descriptors. dim == 16: mean of MFCC 0..11 plus the
// same four envelope descriptors.
inline TimbreVector timbre_features(std::span<const float> x, const StftParams& params,
                                    const MelFilterbank& fb, int dim) {
    if (dim != 16 && dim != 32) throw ConfigError("timbre_features: dim must be 16 or 32");
    TimbreVector out;
    const int n_mfcc = dim == 32 ? 14 : 12;
    const auto coeffs = mfcc(x, params, fb, n_mfcc);
    const auto mfcc_mean = column_means(coeffs);
    for (int i = 0; i < n_mfcc; ++i) {
        out.values.push_back(mfcc_mean[i]);
        out.names.push_back("mfcc" + std::to_string(i) + "_mean");
    }
    if (dim == 32) {
        const auto delta_mean = column_means(frame_delta(coeffs));
        for (int i = 0; i < n_mfcc; ++i) {
            out.values.push_back(delta_mean[i]);
            out.names.push_back("dmfcc" + std::to_string(i) + "_mean");
        }
    }
    const auto env = envelope_descriptors(x, params.hop_samples(), params.sample_rate);
    out.values.insert(out.values.end(), {env.mean_derivative_after_max, env.max_derivative_before_max,
                                         env.flatness, env.centroid_ratio});
    out.names.insert(out.names.end(), {"env_mean_deriv_after_max", "env_max_deriv_before_max",
                                       "env_flatness", "env_centroid_ratio"});
    return out;
}

struct FeatureBank {
    static constexpr int kSize = 258;
    std::vector<double> values;
    // Manifest entries: names[i] describes the descriptor, stats[i] the
    // summary applied ("mean"/"std"/"min"/"max"/"value").
    std::vector<std::string> names;
    std::vector<std::string> stats;
};

namespace detail {

struct SeriesStats {
    double mean = 0.0, std = 0.0, min = 0.0, max = 0.0;
};

inline SeriesStats series_stats(const std::vector<double>& xs) {
    SeriesStats s;
    if (xs.empty()) return s;
    s.min = s.max = xs[0];
    for (double x : xs) {
        s.mean += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean /= static_cast<double>(xs.size());
    for (double x : xs) s.std += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(s.std / static_cast<double>(xs.size()));
    return s;
}

inline void push_series(FeatureBank& bank, const std::string& name, const std::vector<double>& xs) {
    const auto s = series_stats(xs);
    const double vals[4] = {s.mean, s.std, s.min, s.max};
    static const char* stat_names[4] = {"mean", "std", "min", "max"};
    for (int i = 0; i < 4; ++i) {
        bank.values.push_back(vals[i]);
        bank.names.push_back(name);
        bank.stats.push_back(stat_names[i]);
    }
}

inline void push_scalar(FeatureBank& bank, const std::string& name, double v) {
    bank.values.push_back(v);
    bank.names.push_back(name);
    bank.stats.push_back("value");
}

}  // namespace detail

// Deterministic 258-feature vector from the spectrum and the envelope.
// Composition: 15 frame-wise spectral/temporal series and 16 banded mel
// energies, each summarized by {mean, std, min, max}; 14 MFCCs and their
// deltas summarized the same way; envelope statistics; and 14 global scalars.
inline FeatureBank heuristic_feature_bank(std::span<const float> x, const StftParams& params,
                                          const MelFilterbank& fb) {
    if (x.empty()) throw NumericError("heuristic_feature_bank: empty waveform");
    FeatureBank bank;
    const int frame_len = params.frame_samples();
    const int hop = params.hop_samples();
    const int sr = params.sample_rate;
    const size_t n_fft = static_cast<size_t>(params.n_fft());
    const int n_bins = static_cast<int>(n_fft) / 2 + 1;
    const int n_frames = static_cast<int>((x.size() - 1) / hop) + 1;
    const auto window = hann_window(frame_len);

    std::vector<double> centroid(n_frames), spread(n_frames), skewness(n_frames),
        kurtosis(n_frames), flatness(n_frames), crest(n_frames), entropy(n_frames),
        flux(n_frames), zcr(n_frames), rms(n_frames);
    std::vector<std::vector<double>> rolloff(5, std::vector<double>(n_frames));
    static const double kRolloffQ[5] = {0.25, 0.50, 0.75, 0.85, 0.95};
    std::vector<std::vector<double>> band_energy(16, std::vector<double>(n_frames));

    std::vector<double> prev_mag;
    double total_energy_low = 0.0, total_energy_high = 0.0, total_energy_all = 0.0;
    for (int t = 0; t < n_frames; ++t) {
        const long center = static_cast<long>(t) * hop;
        auto frame = detail::windowed_frame(x, center, frame_len, window, 1.0);
        auto mag = magnitude_spectrum(frame, n_fft);

        double sum = 0.0, log_sum = 0.0, peak = 0.0;
        for (double m : mag) {
            sum += m;
            log_sum += std::log(m + 1e-12);
            peak = std::max(peak, m);
        }
        const double mean_mag = sum / n_bins;
        if (sum > 0.0) {
            double c = 0.0;
            for (int k = 0; k < n_bins; ++k) c += mag[k] * (static_cast<double>(k) * sr / n_fft);
            c /= sum;
            centroid[t] = c;
            double m2 = 0.0, m3 = 0.0, m4 = 0.0;
            for (int k = 0; k < n_bins; ++k) {
                const double d = static_cast<double>(k) * sr / n_fft - c;
                const double w = mag[k] / sum;
                m2 += w * d * d;
                m3 += w * d * d * d;
                m4 += w * d * d * d * d;
            }
            spread[t] = std::sqrt(m2);
            const double sd = std::max(spread[t], 1e-12);
            skewness[t] = m3 / (sd * sd * sd);
            kurtosis[t] = m4 / (sd * sd * sd * sd);
            flatness[t] = std::exp(log_sum / n_bins) / (mean_mag + 1e-12);
            crest[t] = peak / (mean_mag + 1e-12);
            double h = 0.0;
            for (int k = 0; k < n_bins; ++k) {
                const double p = mag[k] / sum;
                if (p > 0.0) h -= p * std::log(p);
            }
            entropy[t] = h / std::log(static_cast<double>(n_bins));
            double cum = 0.0;
            int q = 0;
            for (int k = 0; k < n_bins && q < 5; ++k) {
                cum += mag[k];
                while (q < 5 && cum >= kRolloffQ[q] * sum) {
                    rolloff[q][t] = static_cast<double>(k) * sr / n_fft;
                    ++q;
                }
            }
        }
        if (!prev_mag.empty()) {
            double f = 0.0;
            for (int k = 0; k < n_bins; ++k) f += (mag[k] - prev_mag[k]) * (mag[k] - prev_mag[k]);
            flux[t] = std::sqrt(f);
        }
        prev_mag = mag;

        // Time-domain stats over the same centered frame span.
        const long start = center - frame_len / 2;
        int signs = 0, count = 0;
        double e = 0.0;
        float prev = 0.0f;
        bool have_prev = false;
        for (int i = 0; i < frame_len; ++i) {
            const long idx = start + i;
            if (idx < 0 || idx >= static_cast<long>(x.size())) continue;
            const float v = x[idx];
            e += static_cast<double>(v) * v;
            if (have_prev && ((prev >= 0.0f) != (v >= 0.0f))) ++signs;
            prev = v;
            have_prev = true;
            ++count;
        }
        zcr[t] = count > 1 ? static_cast<double>(signs) / (count - 1) : 0.0;
        rms[t] = count > 0 ? std::sqrt(e / count) : 0.0;

        // Banded mel energies: 64 mel bands grouped 4 at a time.
        auto mel = fb.apply(mag);
        for (int b = 0; b < 16; ++b) {
            double acc = 0.0;
            for (int j = 0; j < 4; ++j) acc += mel[b * 4 + j];
            band_energy[b][t] = std::log(acc + 1e-4);
        }

        for (int k = 0; k < n_bins; ++k) {
            const double f_hz = static_cast<double>(k) * sr / n_fft;
            const double p = mag[k] * mag[k];
            total_energy_all += p;
            if (f_hz < 500.0) total_energy_low += p;
            if (f_hz > 4000.0) total_energy_high += p;
        }
    }

    detail::push_series(bank, "spectral_centroid", centroid);
    detail::push_series(bank, "spectral_spread", spread);
    detail::push_series(bank, "spectral_skewness", skewness);
    detail::push_series(bank, "spectral_kurtosis", kurtosis);
    detail::push_series(bank, "spectral_flatness", flatness);
    detail::push_series(bank, "spectral_crest", crest);
    detail::push_series(bank, "spectral_entropy", entropy);
    for (int q = 0; q < 5; ++q)
        detail::push_series(bank, "spectral_rolloff_" + std::to_string(static_cast<int>(kRolloffQ[q] * 100)),
                            rolloff[q]);
    detail::push_series(bank, "spectral_flux", flux);
    detail::push_series(bank, "zero_crossing_rate", zcr);
    detail::push_series(bank, "frame_rms", rms);
    for (int b = 0; b < 16; ++b)
        detail::push_series(bank, "mel_band_energy_" + std::to_string(b), band_energy[b]);

    const auto coeffs = mfcc(x, params, fb, 14);
    const auto deltas = frame_delta(coeffs);
    for (int c = 0; c < 14; ++c) {
        std::vector<double> series(coeffs.size());
        for (size_t t = 0; t < coeffs.size(); ++t) series[t] = coeffs[t][c];
        detail::push_series(bank, "mfcc" + std::to_string(c), series);
    }
    for (int c = 0; c < 14; ++c) {
        std::vector<double> series(deltas.size());
        for (size_t t = 0; t < deltas.size(); ++t) series[t] = deltas[t][c];
        detail::push_series(bank, "dmfcc" + std::to_string(c), series);
    }

    const auto env = rms_envelope(x, hop);
    detail::push_series(bank, "envelope", env);
    const auto ed = envelope_descriptors(x, hop, sr);
    detail::push_scalar(bank, "env_mean_deriv_after_max", ed.mean_derivative_after_max);
    detail::push_scalar(bank, "env_max_deriv_before_max", ed.max_derivative_before_max);
    detail::push_scalar(bank, "env_flatness", ed.flatness);
    detail::push_scalar(bank, "env_centroid_ratio", ed.centroid_ratio);

    const double duration_s = static_cast<double>(x.size()) / sr;
    const double hop_s = static_cast<double>(hop) / sr;
    size_t imax = 0;
    double vmax = env[0];
    for (size_t i = 0; i < env.size(); ++i)
        if (env[i] > vmax) {
            vmax = env[i];
            imax = i;
        }
    size_t last_active = imax;
    int active = 0;
    for (size_t i = 0; i < env.size(); ++i)
        if (env[i] >= 0.1 * vmax) {
            ++active;
            if (i > last_active) last_active = i;
        }
    double wave_energy = 0.0, wave_peak = 0.0;
    size_t peak_pos = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        wave_energy += static_cast<double>(x[i]) * x[i];
        if (std::fabs(static_cast<double>(x[i])) > wave_peak) {
            wave_peak = std::fabs(static_cast<double>(x[i]));
            peak_pos = i;
        }
    }
    const double wave_rms = std::sqrt(wave_energy / static_cast<double>(x.size()));

    detail::push_scalar(bank, "duration_s", duration_s);
    detail::push_scalar(bank, "log_duration", std::log(duration_s + 1e-4));
    detail::push_scalar(bank, "envelope_frames", static_cast<double>(env.size()));
    detail::push_scalar(bank, "attack_time_s", (static_cast<double>(imax) + 0.5) * hop_s);
    detail::push_scalar(bank, "log_attack_time", std::log((static_cast<double>(imax) + 0.5) * hop_s + 1e-4));
    detail::push_scalar(bank, "decay_time_s", static_cast<double>(last_active - imax) * hop_s);
    detail::push_scalar(bank, "temporal_centroid_s", ed.centroid_ratio * duration_s);
    detail::push_scalar(bank, "effective_duration_ratio",
                        vmax > 0.0 ? static_cast<double>(active) / static_cast<double>(env.size()) : 0.0);
    detail::push_scalar(bank, "total_energy", wave_energy);
    detail::push_scalar(bank, "log_total_energy", std::log(wave_energy + 1e-10));
    detail::push_scalar(bank, "waveform_crest", wave_rms > 0.0 ? wave_peak / wave_rms : 0.0);
    detail::push_scalar(bank, "peak_position_ratio",
                        static_cast<double>(peak_pos) / static_cast<double>(x.size()));
    detail::push_scalar(bank, "low_energy_ratio",
                        total_energy_all > 0.0 ? total_energy_low / total_energy_all : 0.0);
    detail::push_scalar(bank, "high_energy_ratio",
                        total_energy_all > 0.0 ? total_energy_high / total_energy_all : 0.0);

    if (bank.values.size() != FeatureBank::kSize)
        throw NumericError("heuristic_feature_bank: composition drifted from 258 entries");
    for (double v : bank.values)
        if (!std::isfinite(v)) throw NumericError("heuristic_feature_bank: non-finite feature");
    return bank;
}

// Text manifest: one line per feature, "index<TAB>name<TAB>statistic".
inline std::string feature_bank_manifest(const FeatureBank& bank) {
    std::string out = "index\tname\tstatistic\n";
    for (size_t i = 0; i < bank.values.size(); ++i)
        out += std::to_string(i) + "\t" + bank.names[i] + "\t" + bank.stats[i] + "\n";
    return out;
}

}  // namespace vpbox::dsp
