#pragma once
// Deterministic randomness for the search experiments: SplitMix64 streams,
// one derived stream per trial so that parallel trials reproduce bit-for-bit
// regardless of scheduling.  Bounded sampling uses rejection (no modulo
// bias), shuffling is Fisher-Yates.

#include <cstdint>
#include <vector>

namespace conc {

struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform over [0, n), n >= 1, via rejection above 2^64 mod n.
    uint64_t bounded(uint64_t n) {
        uint64_t threshold = (-n) % n;  // = 2^64 mod n
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }
};

// Stream for trial `index` under master `seed`: decorrelated by running the
// mixer over (seed, index) so neighboring indices share nothing.
inline uint64_t derive_stream(uint64_t seed, uint64_t index) {
    SplitMix64 g(seed ^ (0xA0761D6478BD642FULL * (index + 1)));
    g.next();
    return g.next();
}

template <class T>
void fisher_yates(std::vector<T>& v, SplitMix64& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = rng.bounded(i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace conc
