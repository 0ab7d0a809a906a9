#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace goatforge {

/// Deterministic generator. The engine is mt19937_64 (bit-exact across
/// platforms by the standard) and all derived draws below avoid
/// std::uniform_int_distribution, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Pure derivation: the stream for record `index` depends only on
    /// (master_seed, index), so generation order and thread count never
    /// change a record.
    static Rng for_record(std::uint64_t master_seed, std::uint64_t index) {
        std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ull * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
        return Rng(z);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw from [lo, hi], inclusive, via rejection.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        if (lo > hi) throw std::invalid_argument("uniform: empty range");
        std::uint64_t span = hi - lo;
        if (span == UINT64_MAX) return next_u64();
        std::uint64_t range = span + 1;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t draw;
        do {
            draw = next_u64();
        } while (draw >= limit);
        return lo + draw % range;
    }

    int digit(int lo, int hi) { return static_cast<int>(uniform(lo, hi)); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Consumes exactly one draw regardless of p.
    bool coin(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace goatforge
