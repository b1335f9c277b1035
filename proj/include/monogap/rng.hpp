#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace monogap {

/// Deterministic 64-bit generator: xoshiro256** seeded through splitmix64.
/// Reports record the generator name and seed so every randomized search can
/// be replayed byte-for-byte.
///
/// Split rule for parallel work: the state for logical stream `k` under seed
/// `s` is produced by running splitmix64 from s XOR (k+1)*0x9E3779B97F4A7C15.
/// Stream 0 is the main generator. Workers never share state, so results are
/// independent of scheduling.
class Rng {
public:
    static constexpr const char* kGeneratorName = "xoshiro256** (splitmix64 seeded)";

    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    static Rng split(std::uint64_t seed, std::uint64_t stream) {
        return Rng(seed ^ (stream + 1) * 0x9E3779B97F4A7C15ULL);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0,1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0,n). Rejection sampling keeps it unbiased.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~std::uint64_t{0} / n));
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        while (u == 0.0) u = next_unit();
        double v = next_unit();
        double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(6.283185307179586 * v);
        have_spare_ = true;
        return r * std::cos(6.283185307179586 * v);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace monogap
