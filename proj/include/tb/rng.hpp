#pragma once

#include <cstdint>

namespace tb {

// splitmix64: tiny, seed-deterministic and platform-independent, which the
// byte-identical generation contract needs.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform-ish in [0, n); modulo bias is irrelevant for fixture generation.
    int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }

    int in(int lo, int hi) { return lo + below(hi - lo + 1); }

    bool coin(uint32_t num, uint32_t den) { return next() % den < num; }

private:
    uint64_t state_;
};

}  // namespace tb
