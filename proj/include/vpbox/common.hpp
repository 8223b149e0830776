// Shared plumbing: error types, deterministic RNG, parallel_for.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace vpbox {

// Error hierarchy. The CLI maps these onto exit codes, so library code
// should throw the most specific one that applies.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Bad configuration, bad arguments, schema violations. Exit code 1.
struct ConfigError : Error {
    using Error::Error;
};
// A required artifact (corpus file, checkpoint, run directory) is absent. Exit code 2.
struct PrerequisiteError : Error {
    using Error::Error;
};
// Numerical failure: NaN loss, divergence, degenerate inputs. Exit code 3.
struct NumericError : Error {
    using Error::Error;
};
// Malformed input data (annotations, wav files, manifests). Exit code 1.
struct ValidationError : Error {
    using Error::Error;
};

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic RNG with explicit draw algorithms. std::uniform_real_distribution
// and friends are implementation-defined, which would break the bit-identical
// reproducibility contract across standard libraries, so the conversions from
// raw 64-bit words to doubles/ints live here.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t s = seed;
        state_[0] = splitmix64(s);
        state_[1] = splitmix64(s);
        state_[2] = splitmix64(s);
        state_[3] = splitmix64(s);
    }

    // xoshiro256** core.
    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Rejection-free via 128-bit multiply.
    uint64_t uniform_int(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    // Standard normal, Box-Muller without caching the second variate.
    double normal() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Derive an independent child stream, e.g. one per (boxeme, iteration).
    Rng child(uint64_t a, uint64_t b = 0) const {
        uint64_t s = state_[0] ^ (0x9e3779b97f4a7c15ULL * (a + 1)) ^ (0xc2b2ae3d27d4eb4fULL * (b + 1));
        return Rng(splitmix64(s));
    }

    uint64_t stream_id() const { return state_[0]; }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t state_[4];
};

// Static-partition parallel map: iteration i is owned by exactly one thread,
// so results are bitwise independent of the thread count.
inline void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    size_t t = std::min<size_t>(static_cast<size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(t);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (size_t w = 0; w < t; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (size_t i = w; i < n; i += t) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline uint64_t fnv1a64(const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace vpbox
