#ifndef PRESORT_RNG_HPP
#define PRESORT_RNG_HPP

#include <cstdint>

namespace presort {

// All randomness in the library flows from this generator: splitmix64
// (the finalizer from Steele, Lea & Flood's SplittableRandom). It is tiny,
// seedable from a single 64-bit value, and produces identical streams on
// every platform, which keeps generated instances, realizations and the
// hashed reconstruction variant reproducible bit for bit.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). Modulo bias is irrelevant for our bounds
    // (all far below 2^32) and keeps the stream layout obvious.
    std::uint64_t next_below(std::uint64_t bound) {
        return bound == 0 ? 0 : next() % bound;
    }

    // Independent child stream; used to give each subsystem (generation,
    // realization, trials) its own deterministic sequence.
    SplitMix64 fork(std::uint64_t tag) {
        return SplitMix64(next() ^ (0xD1B54A32D192ED03ull * (tag + 1)));
    }

private:
    std::uint64_t state_;
};

} // namespace presort

#endif
