// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace hvl {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// PCG32: small, fast, and deterministic across platforms.
class Rng {
 public:
    explicit Rng(uint64_t seed = 0, uint64_t stream = 1) {
        state_ = 0;
        inc_ = (stream << 1u) | 1u;
        nextU32();
        state_ += splitmix64(seed);
        nextU32();
    }

    uint32_t nextU32() {
        uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
        uint32_t rot = static_cast<uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((~rot + 1u) & 31u));
    }

    // Uniform in [0, 1).
    double nextDouble() { return nextU32() * (1.0 / 4294967296.0); }

 private:
    uint64_t state_;
    uint64_t inc_;
};

// Per-pixel stream so results are independent of row scheduling.
inline Rng pixelRng(uint64_t seed, int px, int py) {
    uint64_t h = splitmix64(seed ^ (static_cast<uint64_t>(py) << 32 | static_cast<uint32_t>(px)));
    return Rng(h, splitmix64(h) | 1);
}

}  // namespace hvl
