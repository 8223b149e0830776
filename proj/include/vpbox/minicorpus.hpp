// Synthetic mini corpus: tone and noise bursts with annotations, shaped like
// the real corpus layout, so tests and desk-scale runs work offline.
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vpbox/common.hpp"
#include "vpbox/dataset.hpp"
#include "vpbox/io.hpp"

namespace vpbox {

struct MiniCorpusOptions {
    int n_avp = 2;
    int n_lvt = 2;
    int boxemes_per_training_take = 24;  // balanced across instruments
    int boxemes_per_improv_take = 12;
    int sample_rate = 44100;
    uint64_t seed = 7;
};

namespace detail {

// One synthetic boxeme: instrument-dependent tone/noise burst, with
// per-participant timbre offsets so user-specific structure exists.
inline std::vector<float> synth_boxeme(Instrument instr, int sample_rate, double participant_shift,
                                       Rng& rng) {
    const double dur = instr == Instrument::Kd    ? 0.22
                       : instr == Instrument::Sd  ? 0.28
                       : instr == Instrument::Hhc ? 0.12
                                                  : 0.35;
    const size_t n = static_cast<size_t>(dur * sample_rate * (0.9 + 0.2 * rng.uniform()));
    std::vector<float> x(n);
    const double jitter = 1.0 + 0.05 * (rng.uniform() - 0.5);
    switch (instr) {
        case Instrument::Kd: {
            const double f = 95.0 * participant_shift * jitter;
            for (size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / sample_rate;
                x[i] = static_cast<float>(0.8 * std::exp(-18.0 * t) *
                                          std::sin(2.0 * 3.14159265358979 * f * t * (1.0 + 0.5 * std::exp(-40.0 * t))));
            }
            break;
        }
        case Instrument::Sd: {
            const double f = 240.0 * participant_shift * jitter;
            for (size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / sample_rate;
                const double tone = 0.4 * std::sin(2.0 * 3.14159265358979 * f * t);
                const double noise = 0.5 * (rng.uniform() * 2.0 - 1.0);
                x[i] = static_cast<float>(std::exp(-14.0 * t) * (tone + noise));
            }
            break;
        }
        case Instrument::Hhc:
        case Instrument::Hho: {
            const double decay = instr == Instrument::Hhc ? 55.0 : 9.0;
            double hp_prev_in = 0.0, hp_prev_out = 0.0;
            const double alpha = 0.88 + 0.06 * (participant_shift - 1.0);
            for (size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / sample_rate;
                const double w = rng.uniform() * 2.0 - 1.0;
                // One-pole highpass keeps the energy in the hi-hat band.
                const double hp = alpha * (hp_prev_out + w - hp_prev_in);
                hp_prev_in = w;
                hp_prev_out = hp;
                x[i] = static_cast<float>(0.7 * std::exp(-decay * t) * hp);
            }
            break;
        }
    }
    return x;
}

struct SyllableChoice {
    const char* onset;
    const char* coda;
};

// Two syllable variants per instrument; participants alternate which one
// dominates so boxeme-level classes differ across people.
inline SyllableChoice syllable_for(Instrument instr, int participant_idx, int item_idx) {
    static const SyllableChoice kd[2] = {{"p", "ʌ"}, {"p", ""}};
    static const SyllableChoice sd[2] = {{"t", "ɑ"}, {"ts", "e"}};
    static const SyllableChoice hhc[2] = {{"ts", ""}, {"t", "i"}};
    static const SyllableChoice hho[2] = {{"tʃ", "i"}, {"ts", "s"}};
    const SyllableChoice* pair = instr == Instrument::Kd    ? kd
                                 : instr == Instrument::Sd  ? sd
                                 : instr == Instrument::Hhc ? hhc
                                                            : hho;
    // Dominant variant flips with the participant; every 4th item uses the other.
    const int dominant = participant_idx % 2;
    return pair[item_idx % 4 == 3 ? 1 - dominant : dominant];
}

}  // namespace detail

// Writes `<root>/<dataset>/<participant>/<take>.wav` plus annotations.csv.
// AVP participants get a personal + improv take (all four instruments); LVT
// participants get a train + improv take (kd, sd, hhc only).
inline void make_mini_corpus(const std::string& root, const MiniCorpusOptions& opts = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(root);
    std::ofstream csv(fs::path(root) / "annotations.csv");
    if (!csv) throw Error("cannot write annotations.csv under " + root);
    csv << "file,onset_sec,instrument,onset_phoneme,coda_phoneme,participant,dataset,subset\n";

    Rng master(opts.seed);
    const double gap_sec = 0.5;

    int participant_idx = 0;
    for (int d = 0; d < 2; ++d) {
        const DatasetTag tag = d == 0 ? DatasetTag::AVP : DatasetTag::LVT;
        const int n_participants = d == 0 ? opts.n_avp : opts.n_lvt;
        const std::vector<Instrument> instruments =
            d == 0 ? std::vector<Instrument>{Instrument::Kd, Instrument::Sd, Instrument::Hhc,
                                             Instrument::Hho}
                   : std::vector<Instrument>{Instrument::Kd, Instrument::Sd, Instrument::Hhc};
        for (int p = 0; p < n_participants; ++p, ++participant_idx) {
            const std::string pid =
                std::string(to_string(tag)) + (p < 9 ? "0" : "") + std::to_string(p + 1);
            const double shift = 0.85 + 0.3 * (participant_idx % 4) / 3.0;
            const fs::path dir = fs::path(root) / to_string(tag) / pid;
            fs::create_directories(dir);

            struct Take {
                const char* name;
                const char* subset;
                int count;
            };
            const Take takes[2] = {
                {d == 0 ? "personal" : "train", d == 0 ? "personal" : "train",
                 opts.boxemes_per_training_take},
                {"improv", "improv", opts.boxemes_per_improv_take},
            };
            for (int t = 0; t < 2; ++t) {
                Rng rng = master.child(static_cast<uint64_t>(participant_idx), t);
                std::vector<float> audio;
                std::vector<double> onsets;
                std::vector<Instrument> row_instr;
                for (int i = 0; i < takes[t].count; ++i) {
                    const Instrument instr = instruments[i % instruments.size()];
                    onsets.push_back(static_cast<double>(audio.size()) / opts.sample_rate);
                    row_instr.push_back(instr);
                    auto burst = detail::synth_boxeme(instr, opts.sample_rate, shift, rng);
                    audio.insert(audio.end(), burst.begin(), burst.end());
                    audio.resize(audio.size() + static_cast<size_t>(gap_sec * opts.sample_rate),
                                 0.0f);
                }
                const std::string rel =
                    (fs::path(to_string(tag)) / pid / (std::string(takes[t].name) + ".wav"))
                        .generic_string();
                io::write_wav_f32((fs::path(root) / rel).string(), audio, opts.sample_rate);
                for (size_t i = 0; i < onsets.size(); ++i) {
                    const auto syl = detail::syllable_for(row_instr[i], participant_idx,
                                                          static_cast<int>(i));
                    csv << rel << "," << onsets[i] << "," << to_string(row_instr[i]) << ","
                        << syl.onset << "," << (syl.coda[0] ? syl.coda : "none") << "," << pid
                        << "," << to_string(tag) << "," << takes[t].subset << "\n";
                }
            }
        }
    }
}

}  // namespace vpbox
