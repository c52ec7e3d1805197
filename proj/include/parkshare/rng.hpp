#pragma once

#include <cstdint>

namespace parkshare {

// Finalizer of the splitmix64 generator; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Small deterministic generator (splitmix64). One instance is one
// substream; the state is caller-owned and advances only on draws.
class RngStream {
public:
    explicit RngStream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // p = 0 never fires, p = 1 always fires (next_double() < 1).
    bool bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t state_;
};

// Derives an independent substream from a master seed and up to three
// labels. Streams for distinct label tuples are decorrelated regardless
// of the order they are created or consumed in, which keeps simulations
// bitwise reproducible under any scheduling of the per-trial work.
inline RngStream substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                           std::uint64_t c = 0) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return RngStream(h);
}

} // namespace parkshare
