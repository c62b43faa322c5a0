#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fuzzygeno {

inline constexpr int kFrameSize = 32;

// Dataset / image problems (bad files, blank samples, empty classes).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Model file problems (version mismatch, malformed content, broken invariants).
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic random stream. All bounded draws go through this wrapper so
// that identical seeds give identical sequences regardless of the standard
// library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        if (hi <= lo) return lo;
        std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return lo + static_cast<int>(v % range);
    }

    // Uniform real in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

  private:
    std::uint64_t state_;
};

}  // namespace fuzzygeno
