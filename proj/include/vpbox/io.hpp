// File formats: WAV read/write, the flat binary float grid, PGM images,
// and a tiny CSV reader for annotation tables.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vpbox/common.hpp"

namespace vpbox::io {

namespace detail {

inline void write_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}
inline void write_u16(std::ostream& os, uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    os.write(reinterpret_cast<const char*>(b), 2);
}
inline uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}
inline uint16_t read_u16(std::istream& is) {
    unsigned char b[2];
    is.read(reinterpret_cast<char*>(b), 2);
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

}  // namespace detail

struct WavData {
    std::vector<float> samples;  // mono, [-1, 1]
    int sample_rate = 0;
};

// Reads PCM16, PCM24, PCM32 and IEEE float32 WAV. Multichannel input is
// averaged down to mono.
inline WavData read_wav(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw PrerequisiteError("cannot open wav file: " + path);
    char riff[4], wave[4];
    is.read(riff, 4);
    detail::read_u32(is);
    is.read(wave, 4);
    if (std::strncmp(riff, "RIFF", 4) != 0 || std::strncmp(wave, "WAVE", 4) != 0)
        throw ValidationError("not a RIFF/WAVE file: " + path);

    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t sample_rate = 0;
    std::vector<unsigned char> data;
    while (is) {
        char id[4];
        is.read(id, 4);
        if (!is) break;
        uint32_t size = detail::read_u32(is);
        if (std::strncmp(id, "fmt ", 4) == 0) {
            format = detail::read_u16(is);
            channels = detail::read_u16(is);
            sample_rate = detail::read_u32(is);
            detail::read_u32(is);  // byte rate
            detail::read_u16(is);  // block align
            bits = detail::read_u16(is);
            if (size > 16) is.seekg(size - 16, std::ios::cur);
        } else if (std::strncmp(id, "data", 4) == 0) {
            data.resize(size);
            is.read(reinterpret_cast<char*>(data.data()), size);
        } else {
            is.seekg(size + (size & 1), std::ios::cur);
        }
    }
    if (channels == 0 || sample_rate == 0) throw ValidationError("wav missing fmt chunk: " + path);
    if (data.empty()) throw ValidationError("wav missing data chunk: " + path);

    const size_t bytes_per_sample = bits / 8;
    const size_t n_frames = data.size() / (bytes_per_sample * channels);
    WavData out;
    out.sample_rate = static_cast<int>(sample_rate);
    out.samples.resize(n_frames);
    for (size_t f = 0; f < n_frames; ++f) {
        double acc = 0.0;
        for (size_t c = 0; c < channels; ++c) {
            const unsigned char* p = data.data() + (f * channels + c) * bytes_per_sample;
            double v = 0.0;
            if (format == 1 && bits == 16) {
                int16_t s = static_cast<int16_t>(p[0] | (p[1] << 8));
                v = static_cast<double>(s) / 32768.0;
            } else if (format == 1 && bits == 24) {
                int32_t s = (p[0] << 8) | (p[1] << 16) | (p[2] << 24);
                v = static_cast<double>(s >> 8) / 8388608.0;
            } else if (format == 1 && bits == 32) {
                int32_t s;
                std::memcpy(&s, p, 4);
                v = static_cast<double>(s) / 2147483648.0;
            } else if (format == 3 && bits == 32) {
                float s;
                std::memcpy(&s, p, 4);
                v = s;
            } else {
                throw ValidationError("unsupported wav encoding in " + path);
            }
            acc += v;
        }
        out.samples[f] = static_cast<float>(acc / channels);
    }
    return out;
}

// Writes mono IEEE float32 WAV (lossless round trip for cached corpora).
inline void write_wav_f32(const std::string& path, const std::vector<float>& samples,
                          int sample_rate) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write wav file: " + path);
    const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 4);
    os.write("RIFF", 4);
    detail::write_u32(os, 36 + data_bytes);
    os.write("WAVE", 4);
    os.write("fmt ", 4);
    detail::write_u32(os, 16);
    detail::write_u16(os, 3);  // IEEE float
    detail::write_u16(os, 1);
    detail::write_u32(os, static_cast<uint32_t>(sample_rate));
    detail::write_u32(os, static_cast<uint32_t>(sample_rate * 4));
    detail::write_u16(os, 4);
    detail::write_u16(os, 32);
    os.write("data", 4);
    detail::write_u32(os, data_bytes);
    os.write(reinterpret_cast<const char*>(samples.data()), data_bytes);
}

// Flat binary grid: magic "VPGR", u32 rows, u32 cols, then rows*cols
// row-major little-endian float32.
inline void write_grid(const std::string& path, const std::vector<float>& values, uint32_t rows,
                       uint32_t cols) {
    if (values.size() != static_cast<size_t>(rows) * cols)
        throw Error("write_grid: size mismatch");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write grid file: " + path);
    os.write("VPGR", 4);
    detail::write_u32(os, rows);
    detail::write_u32(os, cols);
    os.write(reinterpret_cast<const char*>(values.data()), values.size() * 4);
}

struct Grid {
    std::vector<float> values;
    uint32_t rows = 0, cols = 0;
};

inline Grid read_grid(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw PrerequisiteError("cannot open grid file: " + path);
    char magic[4];
    is.read(magic, 4);
    if (std::strncmp(magic, "VPGR", 4) != 0) throw ValidationError("bad grid magic in " + path);
    Grid g;
    g.rows = detail::read_u32(is);
    g.cols = detail::read_u32(is);
    g.values.resize(static_cast<size_t>(g.rows) * g.cols);
    is.read(reinterpret_cast<char*>(g.values.data()), g.values.size() * 4);
    if (!is) throw ValidationError("truncated grid file: " + path);
    return g;
}

// 8-bit binary PGM. values are min-max scaled to [0, 255]; a constant grid
// becomes all black.
inline void write_pgm(const std::string& path, const std::vector<float>& values, uint32_t rows,
                      uint32_t cols) {
    if (values.size() != static_cast<size_t>(rows) * cols) throw Error("write_pgm: size mismatch");
    float lo = values.empty() ? 0.f : *std::min_element(values.begin(), values.end());
    float hi = values.empty() ? 0.f : *std::max_element(values.begin(), values.end());
    float scale = hi > lo ? 255.0f / (hi - lo) : 0.0f;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write pgm file: " + path);
    os << "P5\n" << cols << " " << rows << "\n255\n";
    for (size_t i = 0; i < values.size(); ++i) {
        float v = (values[i] - lo) * scale;
        os.put(static_cast<char>(static_cast<int>(std::lround(v))));
    }
}

// Minimal CSV reader: UTF-8, double-quote escaping, no embedded newlines.
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw PrerequisiteError("cannot open csv file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

}  // namespace vpbox::io
