#pragma once

#include <cstdint>
#include <random>

namespace tegsim {

// All randomness in the library flows through this wrapper: mt19937_64 (the
// raw generator is fully pinned by the C++ standard) plus the two mappings
// below. std::uniform_int_distribution and friends are implementation-defined
// and would break the byte-identical-output guarantee across toolchains, so
// they must not be used anywhere in this codebase.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [lo, hi] via rejection sampling.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(gen_()); // full 64-bit range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t draw;
        do {
            draw = gen_();
        } while (draw >= limit);
        return lo + static_cast<std::int64_t>(draw % span);
    }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 gen_;
};

// splitmix64 step; used to derive independent child seeds (per round, per
// batch worker) from one master seed without correlating the streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master + 0x632be59bd9b4e019ull * (stream + 1);
    return splitmix64(s);
}

} // namespace tegsim
