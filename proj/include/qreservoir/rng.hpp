#pragma once

#include <cmath>
#include <cstdint>

namespace qrc {

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Deterministically derives a sub-seed from a base seed and a salt
// (window index, prediction step, ...). Distinct salts give decorrelated
// seeds, so nested runs never share streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) noexcept {
    std::uint64_t s = base ^ (salt * 0xD1B54A32D192ED03ULL + 0x9E3779B97F4A7C15ULL);
    return detail::splitmix64_next(s);
}

// Counter-seeded random stream. The pair (seed, stream_id) fully determines
// the sequence, so independent shots can run on any thread layout and still
// reproduce bit-identical results. Core generator is xoshiro256++ seeded
// through splitmix64.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept {
        std::uint64_t s = seed ^ (stream_id * 0x9E3779B97F4A7C15ULL + 0xBF58476D1CE4E5B9ULL);
        for (auto& word : state_) {
            word = detail::splitmix64_next(s);
        }
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the paired draw is cached.
    double gaussian() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace qrc
