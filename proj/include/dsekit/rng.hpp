#pragma once

// Seeded deterministic random number generation.
//
// The whole toolkit uses a single fixed generator: xoshiro256** with
// splitmix64 seed expansion. std::mt19937 would be portable, but the
// standard distributions (<random>) are implementation-defined, which
// breaks the bit-for-bit reproducibility contract across toolchains.
// Every draw below is therefore hand-rolled on top of next_u64().

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dsekit {

class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed) {
        // splitmix64 expansion; makes seed 0 legal and well-mixed.
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53 bits of precision.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    // Uniform integer in [lo, hi], inclusive, rejection-sampled (no modulo bias).
    long long uniform_int(long long lo, long long hi) {
        if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<long long>(next_u64());  // full 64-bit range
        return lo + static_cast<long long>(bounded(span));
    }

    // Uniform index in [0, n).
    std::size_t pick(std::size_t n) {
        if (n == 0) throw std::invalid_argument("pick: empty range");
        return static_cast<std::size_t>(bounded(n));
    }

    bool coin(double p = 0.5) { return uniform01() < p; }

    // Standard normal via Box-Muller. Two uniforms per draw, no cached state.
    double gaussian() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = pick(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t bounded(std::uint64_t n) {
        // Lemire-style rejection: draw until below the largest multiple of n.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
        std::uint64_t r = next_u64();
        while (r > limit) r = next_u64();
        return r % n;
    }

    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace dsekit
