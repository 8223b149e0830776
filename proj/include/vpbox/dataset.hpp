// Corpus model: annotated boxemes, ingestion from the on-disk layout,
// split assignment, and the seven label spaces.
#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vpbox/augment.hpp"
#include "vpbox/common.hpp"
#include "vpbox/io.hpp"
#include "vpbox/phonemes.hpp"

namespace vpbox {

enum class DatasetTag { AVP, LVT };
enum class Instrument { Kd, Sd, Hhc, Hho };
enum class Split { TrainVal, EvTrain, EvTest };
// Whether the take came from a participant's training recordings or from a
// freestyle improvisation. Split assignment keys off this for eval ids.
enum class RecordingKind { Training, Improv };

inline const char* to_string(DatasetTag d) { return d == DatasetTag::AVP ? "avp" : "lvt"; }
inline const char* to_string(Instrument i) {
    switch (i) {
        case Instrument::Kd: return "kd";
        case Instrument::Sd: return "sd";
        case Instrument::Hhc: return "hhc";
        default: return "hho";
    }
}
inline const char* to_string(Split s) {
    switch (s) {
        case Split::TrainVal: return "trainval";
        case Split::EvTrain: return "ev_train";
        default: return "ev_test";
    }
}

inline Instrument parse_instrument(const std::string& s) {
    if (s == "kd") return Instrument::Kd;
    if (s == "sd") return Instrument::Sd;
    if (s == "hhc") return Instrument::Hhc;
    if (s == "hho") return Instrument::Hho;
    throw ValidationError("unknown instrument token '" + s + "'");
}

inline DatasetTag parse_dataset_tag(const std::string& s) {
    if (s == "avp" || s == "AVP") return DatasetTag::AVP;
    if (s == "lvt" || s == "LVT") return DatasetTag::LVT;
    throw ValidationError("unknown dataset token '" + s + "'");
}

struct AnnotatedBoxeme {
    std::vector<float> waveform;  // mono, [-1, 1]
    int sample_rate = 44100;
    std::string participant_id;
    DatasetTag dataset_tag = DatasetTag::AVP;
    Instrument instrument = Instrument::Kd;
    std::string onset_phoneme;        // IPA, NFC
    std::string coda_phoneme;         // IPA; empty string = no coda
    Split split = Split::TrainVal;
    RecordingKind kind = RecordingKind::Training;
    std::string source_file;          // annotation row provenance
    double onset_sec = 0.0;
    int source_index = -1;            // pre-augmentation index; copies share it

    std::string syllable_original() const {
        return onset_phoneme + "_" + (coda_phoneme.empty() ? "none" : coda_phoneme);
    }
    std::string syllable_reduced(const PhonemeTable& table = PhonemeTable::builtin()) const {
        return table.reduce(onset_phoneme, PhonemeRole::Onset) + "_" +
               table.reduce(coda_phoneme, PhonemeRole::Coda);
    }
};

struct CorpusOptions {
    int sample_rate = 44100;
    double max_segment_sec = 1.0;
    // The fixed AVP subset is only used by out-of-scope baselines; skip it.
    bool skip_fixed_subset = true;
};

namespace detail {

inline RecordingKind parse_subset(const std::string& s) {
    if (s == "personal" || s == "train" || s == "fixed") return RecordingKind::Training;
    if (s == "improv" || s == "improvisation" || s == "test") return RecordingKind::Improv;
    throw ValidationError("unknown subset token '" + s + "'");
}

}  // namespace detail

// Reads `<root>/annotations.csv` plus the referenced audio files, segments
// each boxeme from its onset to the next onset in the same file (or file
// end), capped at max_segment_sec, and resamples to the configured rate.
inline std::vector<AnnotatedBoxeme> load_corpus(const std::string& root,
                                                const CorpusOptions& opts = {}) {
    namespace fs = std::filesystem;
    const std::string csv_path = (fs::path(root) / "annotations.csv").string();
    auto rows = io::read_csv(csv_path);
    if (rows.empty()) throw ValidationError("annotations.csv is empty: " + csv_path);
    const std::vector<std::string> header = {"file",          "onset_sec",    "instrument",
                                             "onset_phoneme", "coda_phoneme", "participant",
                                             "dataset",       "subset"};
    if (rows[0] != header)
        throw ValidationError("annotations.csv: unexpected header in " + csv_path);

    struct Row {
        std::string file;
        double onset_sec;
        Instrument instrument;
        std::string onset_phoneme, coda_phoneme, participant;
        DatasetTag dataset;
        RecordingKind kind;
        size_t line;
    };
    std::vector<Row> parsed;
    for (size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != header.size())
            throw ValidationError("annotations.csv row " + std::to_string(i + 1) +
                                  ": expected 8 fields, got " + std::to_string(r.size()));
        if (opts.skip_fixed_subset && r[7] == "fixed") continue;
        Row row;
        row.file = r[0];
        try {
            row.onset_sec = std::stod(r[1]);
        } catch (const std::exception&) {
            throw ValidationError("annotations.csv row " + std::to_string(i + 1) +
                                  ": bad onset_sec '" + r[1] + "'");
        }
        row.instrument = parse_instrument(r[2]);
        row.onset_phoneme = r[3];
        row.coda_phoneme = (r[4] == "none" || r[4] == "NONE") ? "" : r[4];
        row.participant = r[5];
        row.dataset = parse_dataset_tag(r[6]);
        row.kind = detail::parse_subset(r[7]);
        row.line = i + 1;
        if (row.onset_phoneme.empty())
            throw ValidationError("annotations.csv row " + std::to_string(row.line) +
                                  ": onset phoneme missing");
        if (row.dataset == DatasetTag::LVT && row.instrument == Instrument::Hho)
            throw ValidationError("annotations.csv row " + std::to_string(row.line) +
                                  ": LVT does not contain hho");
        parsed.push_back(std::move(row));
    }

    // Group rows by file, preserving annotation order.
    std::vector<std::string> file_order;
    std::map<std::string, std::vector<size_t>> by_file;
    for (size_t i = 0; i < parsed.size(); ++i) {
        auto [it, inserted] = by_file.try_emplace(parsed[i].file);
        if (inserted) file_order.push_back(parsed[i].file);
        it->second.push_back(i);
    }

    std::vector<AnnotatedBoxeme> boxemes(parsed.size());
    for (const auto& file : file_order) {
        const auto& idxs = by_file[file];
        for (size_t j = 1; j < idxs.size(); ++j)
            if (parsed[idxs[j]].onset_sec <= parsed[idxs[j - 1]].onset_sec)
                throw ValidationError("annotations.csv row " + std::to_string(parsed[idxs[j]].line) +
                                      ": non-monotonic onset in file " + file);

        const std::string wav_path = (fs::path(root) / file).string();
        io::WavData wav;
        try {
            wav = io::read_wav(wav_path);
        } catch (const PrerequisiteError&) {
            throw PrerequisiteError("annotations.csv row " + std::to_string(parsed[idxs[0]].line) +
                                    ": missing audio file " + wav_path);
        }
        if (wav.sample_rate != opts.sample_rate)
            wav.samples = augment::resample(
                wav.samples, static_cast<double>(wav.sample_rate) / opts.sample_rate);

        const long n = static_cast<long>(wav.samples.size());
        for (size_t j = 0; j < idxs.size(); ++j) {
            const Row& row = parsed[idxs[j]];
            const long start = std::lround(row.onset_sec * opts.sample_rate);
            long stop = j + 1 < idxs.size()
                            ? std::lround(parsed[idxs[j + 1]].onset_sec * opts.sample_rate)
                            : n;
            stop = std::min({stop, n, start + std::lround(opts.max_segment_sec * opts.sample_rate)});
            if (start < 0 || start >= n || stop <= start)
                throw ValidationError("annotations.csv row " + std::to_string(row.line) +
                                      ": onset outside audio file " + file);
            AnnotatedBoxeme b;
            b.waveform.assign(wav.samples.begin() + start, wav.samples.begin() + stop);
            for (float v : b.waveform)
                if (!std::isfinite(v))
                    throw ValidationError("annotations.csv row " + std::to_string(row.line) +
                                          ": non-finite sample in " + file);
            b.sample_rate = opts.sample_rate;
            b.participant_id = row.participant;
            b.dataset_tag = row.dataset;
            b.instrument = row.instrument;
            b.onset_phoneme = row.onset_phoneme;
            b.coda_phoneme = row.coda_phoneme;
            b.kind = row.kind;
            b.source_file = row.file;
            b.onset_sec = row.onset_sec;
            b.source_index = static_cast<int>(idxs[j]);
            boxemes[idxs[j]] = std::move(b);
        }
    }
    return boxemes;
}

struct SplitPlan {
    std::vector<std::string> trainval_participants;
    std::vector<std::string> eval_participants;
};

// Marks eval participants' training recordings EV_TRAIN and their
// improvisations EV_TEST; everyone else is TRAINVAL. strict enforces the
// full-protocol requirement of exactly 4 AVP + 4 LVT eval participants.
inline SplitPlan assign_splits(std::vector<AnnotatedBoxeme>& boxemes,
                               const std::vector<std::string>& eval_ids, bool strict = true) {
    std::map<std::string, DatasetTag> participants;
    for (const auto& b : boxemes) participants[b.participant_id] = b.dataset_tag;

    std::set<std::string> eval_set(eval_ids.begin(), eval_ids.end());
    if (eval_set.size() != eval_ids.size())
        throw ConfigError("assign_splits: duplicate eval participant id");
    int n_avp = 0, n_lvt = 0;
    for (const auto& id : eval_ids) {
        auto it = participants.find(id);
        if (it == participants.end())
            throw ConfigError("assign_splits: eval participant '" + id + "' not in corpus");
        (it->second == DatasetTag::AVP ? n_avp : n_lvt)++;
    }
    if (strict) {
        if (n_avp != 4 || n_lvt != 4)
            throw ConfigError("assign_splits: need exactly 4 AVP + 4 LVT eval participants, got " +
                              std::to_string(n_avp) + "+" + std::to_string(n_lvt));
    } else if (eval_ids.empty() || n_avp == 0 || n_lvt == 0) {
        throw ConfigError("assign_splits: need at least one eval participant per dataset");
    }

    std::map<std::string, std::pair<int, int>> eval_counts;  // (training, improv)
    for (auto& b : boxemes) {
        if (eval_set.count(b.participant_id)) {
            b.split = b.kind == RecordingKind::Training ? Split::EvTrain : Split::EvTest;
            auto& c = eval_counts[b.participant_id];
            (b.kind == RecordingKind::Training ? c.first : c.second)++;
        } else {
            b.split = Split::TrainVal;
        }
    }
    for (const auto& id : eval_ids) {
        const auto& c = eval_counts[id];
        if (c.first == 0)
            throw ValidationError("assign_splits: eval participant '" + id +
                                  "' has no training recordings");
        if (c.second == 0)
            throw ValidationError("assign_splits: eval participant '" + id +
                                  "' has no improvisation recordings");
    }

    SplitPlan plan;
    plan.eval_participants = eval_ids;
    for (const auto& [id, tag] : participants)
        if (!eval_set.count(id)) plan.trainval_participants.push_back(id);
    return plan;
}

// -------------------------------------------------------------------------
// Label spaces

enum class Strategy {
    InstrOrig,
    InstrRed,
    SyllOrig,
    SyllRed,
    PhonOrig,
    PhonRed,
    Boxeme,
};

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::InstrOrig: return "instr_orig";
        case Strategy::InstrRed: return "instr_red";
        case Strategy::SyllOrig: return "syll_orig";
        case Strategy::SyllRed: return "syll_red";
        case Strategy::PhonOrig: return "phon_orig";
        case Strategy::PhonRed: return "phon_red";
        default: return "boxeme";
    }
}

inline Strategy parse_strategy(const std::string& s) {
    for (Strategy st : {Strategy::InstrOrig, Strategy::InstrRed, Strategy::SyllOrig,
                        Strategy::SyllRed, Strategy::PhonOrig, Strategy::PhonRed, Strategy::Boxeme})
        if (s == to_string(st)) return st;
    throw ConfigError("unknown strategy '" + s + "'");
}

inline std::vector<Strategy> all_strategies() {
    return {Strategy::InstrOrig, Strategy::InstrRed, Strategy::SyllOrig, Strategy::SyllRed,
            Strategy::PhonOrig,  Strategy::PhonRed,  Strategy::Boxeme};
}

inline int strategy_heads(Strategy s) {
    return (s == Strategy::PhonOrig || s == Strategy::PhonRed) ? 2 : 1;
}

class LabelSpace {
  public:
    LabelSpace() = default;

    Strategy strategy() const { return strategy_; }
    int heads() const { return static_cast<int>(class_names_.size()); }
    int num_classes(int head = 0) const { return static_cast<int>(class_names_[head].size()); }
    const std::vector<std::string>& class_names(int head = 0) const { return class_names_[head]; }

    // Class index per head. Total over the boxemes the space was built from.
    std::vector<int> indices(const AnnotatedBoxeme& b) const {
        std::vector<int> out;
        for (int h = 0; h < heads(); ++h) {
            const auto key = key_for(b, h);
            auto it = index_[h].find(key);
            if (it == index_[h].end())
                throw ValidationError("label space " + std::string(to_string(strategy_)) +
                                      ": unseen class key '" + key + "'");
            out.push_back(it->second);
        }
        return out;
    }

    static LabelSpace build(Strategy strategy, std::span<const AnnotatedBoxeme> boxemes,
                            const PhonemeTable& table = PhonemeTable::builtin()) {
        if (boxemes.empty()) throw ValidationError("build_label_space: no boxemes");
        LabelSpace ls;
        ls.strategy_ = strategy;
        ls.table_ = &table;
        const int heads = strategy_heads(strategy);
        std::vector<std::set<std::string>> keys(heads);
        for (const auto& b : boxemes)
            for (int h = 0; h < heads; ++h) keys[h].insert(ls.key_for(b, h));
        ls.class_names_.resize(heads);
        ls.index_.resize(heads);
        for (int h = 0; h < heads; ++h) {
            if (strategy == Strategy::InstrOrig) {
                // Canonical instrument order instead of lexicographic.
                for (const char* name : {"kd", "sd", "hhc", "hho"})
                    if (keys[h].count(name)) ls.class_names_[h].push_back(name);
            } else if (strategy == Strategy::InstrRed) {
                for (const char* name : {"drum", "hi-hat"})
                    if (keys[h].count(name)) ls.class_names_[h].push_back(name);
            } else {
                ls.class_names_[h].assign(keys[h].begin(), keys[h].end());
            }
            for (size_t i = 0; i < ls.class_names_[h].size(); ++i)
                ls.index_[h][ls.class_names_[h][i]] = static_cast<int>(i);
        }
        return ls;
    }

  private:
    std::string key_for(const AnnotatedBoxeme& b, int head) const {
        switch (strategy_) {
            case Strategy::InstrOrig:
                return to_string(b.instrument);
            case Strategy::InstrRed:
                return (b.instrument == Instrument::Kd || b.instrument == Instrument::Sd)
                           ? "drum"
                           : "hi-hat";
            case Strategy::SyllOrig:
                return b.syllable_original();
            case Strategy::SyllRed:
                return b.syllable_reduced(*table_);
            case Strategy::PhonOrig:
                return head == 0 ? b.onset_phoneme
                                 : (b.coda_phoneme.empty() ? "none" : b.coda_phoneme);
            case Strategy::PhonRed:
                return head == 0 ? table_->reduce(b.onset_phoneme, PhonemeRole::Onset)
                                 : table_->reduce(b.coda_phoneme, PhonemeRole::Coda);
            default:
                return b.participant_id + "/" + b.syllable_original();
        }
    }

    Strategy strategy_ = Strategy::InstrOrig;
    std::vector<std::vector<std::string>> class_names_;
    std::vector<std::map<std::string, int>> index_;
    const PhonemeTable* table_ = &PhonemeTable::builtin();
};

inline LabelSpace build_label_space(Strategy strategy, std::span<const AnnotatedBoxeme> boxemes,
                                    const PhonemeTable& table = PhonemeTable::builtin()) {
    return LabelSpace::build(strategy, boxemes, table);
}

// Instrument class index on the fixed original instrument set, used as the
// KNN evaluation target for every strategy.
inline int instrument_index(Instrument i) { return static_cast<int>(i); }
inline constexpr int kNumInstruments = 4;

}  // namespace vpbox
