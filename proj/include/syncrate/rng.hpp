#ifndef SYNCRATE_RNG_HPP
#define SYNCRATE_RNG_HPP

#include <cstdint>

// Counter-based random number utilities. Every draw is a pure function of
// (seed, stream, counter words), so simulations can give each entity its own
// substream: changing the sync policy never perturbs the randomness seen by
// links, packets or flows, which keeps matched-seed comparisons meaningful.

namespace syncrate {

// Fixed substream ids used across the project.
enum class Stream : std::uint64_t {
    kLinkFlip = 1,
    kPacket = 2,
    kFlowArrival = 3,
    kOracleNoise = 4,
    kLearnerDraw = 5,
    kTopology = 6,
    kInstanceGen = 7,
};

constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t substream_u64(std::uint64_t seed, Stream stream,
                                      std::uint64_t a = 0, std::uint64_t b = 0,
                                      std::uint64_t c = 0) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ static_cast<std::uint64_t>(stream));
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

// Map 64 random bits to a double in [0, 1).
constexpr double unit_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double substream_unit(std::uint64_t seed, Stream stream,
                                std::uint64_t a = 0, std::uint64_t b = 0,
                                std::uint64_t c = 0) {
    return unit_from_bits(substream_u64(seed, stream, a, b, c));
}

// Sequential generator over one substream; used where draws are consumed in
// order (candidate sampling, instance generation) rather than keyed by entity.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, Stream stream, std::uint64_t instance = 0)
        : key_(substream_u64(seed, stream, instance)) {}

    std::uint64_t next_u64() { return mix64(key_ ^ counter_++); }

    double next_unit() { return unit_from_bits(next_u64()); }

    bool bernoulli(double p) { return next_unit() < p; }

    // Unbiased draw in [0, bound) via rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (-bound) % bound;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    // Uniform double in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace syncrate

#endif
