#pragma once

#include <cstdint>

namespace flexline {

// SplitMix64 stream. The standard library engines are portable but their
// distributions are not; every draw here is a fixed algorithm so that
// identical seeds give identical bytes on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, n) via 128-bit multiply (Lemire, no rejection;
    // bias < 2^-64 and, more to the point, fully deterministic).
    std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform integer in [lo, hi] inclusive.
    long long uniform_int(long long lo, long long hi) {
        return lo + static_cast<long long>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Box-Muller without the cached spare, so the state is a single u64.
    double gaussian(double mu, double sigma);

    std::uint64_t state() const { return state_; }
    void set_state(std::uint64_t s) { state_ = s; }

private:
    std::uint64_t state_;
};

// Mixes independent stream labels into a seed (shield rollouts, per-episode
// instances, bench runs). Order of arguments matters.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace flexline
