// Phoneme grouping table for the reduced label sets, plus the reduction rule.
// Group representatives are the first member of each row; phonemes outside
// the table reduce to themselves (singleton classes) and an absent coda
// reduces to the dedicated "none" class.
#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vpbox/common.hpp"

namespace vpbox {

enum class PhonemeRole { Onset, Coda };

inline const char* to_string(PhonemeRole r) { return r == PhonemeRole::Onset ? "onset" : "coda"; }

class PhonemeTable {
  public:
    struct Group {
        PhonemeRole role;
        std::string representative;
        std::vector<std::string> members;
    };

    static const PhonemeTable& builtin() {
        static const PhonemeTable table{{
            {PhonemeRole::Onset, "t", {"t", "!"}},
            {PhonemeRole::Onset, "ts", {"ts", "s"}},
            {PhonemeRole::Onset, "tʃ", {"tʃ", "tɕ", "dʒ", "tʒ"}},
            {PhonemeRole::Onset, "kx", {"kx", "k", "kʃ"}},
            {PhonemeRole::Onset, "p", {"p", "ʡʢ"}},
            {PhonemeRole::Coda, "ɑ", {"ɑ", "æ", "ɐ", "ʌ"}},
            {PhonemeRole::Coda, "e", {"e", "œ", "ə"}},
            {PhonemeRole::Coda, "i", {"i", "y", "ɪ"}},
            {PhonemeRole::Coda, "o", {"o", "ʊ"}},
            {PhonemeRole::Coda, "u", {"u", "ɯ"}},
        }};
        return table;
    }

    explicit PhonemeTable(std::vector<Group> groups) : groups_(std::move(groups)) {
        for (const auto& g : groups_)
            for (const auto& m : g.members) lookup_[{g.role == PhonemeRole::Onset, m}] = g.representative;
    }

    // Format: one group per line, "onset|coda<TAB>member member member".
    // The first member is the group representative. '#' starts a comment.
    static PhonemeTable load(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw PrerequisiteError("cannot open phoneme table: " + path);
        std::vector<Group> groups;
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ss(line);
            std::string role_token;
            ss >> role_token;
            Group g;
            if (role_token == "onset")
                g.role = PhonemeRole::Onset;
            else if (role_token == "coda")
                g.role = PhonemeRole::Coda;
            else
                throw ValidationError("phoneme table: bad role token '" + role_token + "'");
            std::string member;
            while (ss >> member) g.members.push_back(member);
            if (g.members.empty()) throw ValidationError("phoneme table: empty group row");
            g.representative = g.members[0];
            groups.push_back(std::move(g));
        }
        return PhonemeTable(std::move(groups));
    }

    std::string serialize() const {
        std::string out = "# role<TAB>members (first member is the group representative)\n";
        for (const auto& g : groups_) {
            out += std::string(to_string(g.role)) + "\t";
            for (size_t i = 0; i < g.members.size(); ++i) {
                if (i) out += " ";
                out += g.members[i];
            }
            out += "\n";
        }
        return out;
    }

    // Maps a phoneme to its reduced-class representative.
    std::string reduce(const std::string& phoneme, PhonemeRole role) const {
        if (phoneme.empty() || phoneme == "none") {
            if (role == PhonemeRole::Onset)
                throw ValidationError("reduce_phoneme: onsets cannot be absent");
            return "none";
        }
        auto it = lookup_.find({role == PhonemeRole::Onset, phoneme});
        return it != lookup_.end() ? it->second : phoneme;
    }

    const std::vector<Group>& groups() const { return groups_; }

  private:
    std::vector<Group> groups_;
    std::map<std::pair<bool, std::string>, std::string> lookup_;
};

inline std::string reduce_phoneme(const std::string& phoneme, PhonemeRole role) {
    return PhonemeTable::builtin().reduce(phoneme, role);
}

}  // namespace vpbox
