#pragma once

#include <cstdint>

namespace fourblock {

// splitmix64; identical streams on every platform, unlike the unspecified
// std::uniform_int_distribution mappings.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform-ish in [0, n); modulo bias is irrelevant at test scales.
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    long range(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(unsigned num, unsigned den) { return below(den) < num; }

private:
    std::uint64_t state_;
};

}  // namespace fourblock
