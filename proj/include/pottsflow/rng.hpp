#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace pottsflow {

/// Anything the samplers can draw from. Implemented by Rng for real runs and by
/// BranchEnumerator (exact.hpp) to enumerate every outcome of a sampler.
template <class R>
concept RandomSource = requires(R& r, std::size_t n, double p, std::span<const double> w) {
    { r.uniform_index(n) } -> std::same_as<std::size_t>;
    { r.bernoulli(p) } -> std::same_as<bool>;
    { r.discrete(w) } -> std::same_as<std::size_t>;
};

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Purposes for stream derivation. Distinct purposes never share a stream.
enum class StreamPurpose : std::uint64_t {
    Chain = 1,
    Coupling = 2,
    Estimator = 3,
    Test = 4,
};

/// Derives the 64-bit key of stream (purpose, index, replica) from a master seed.
/// Counter-based: the key depends only on the inputs, never on how many other
/// streams were created before.
constexpr std::uint64_t derive_stream_key(std::uint64_t seed, StreamPurpose purpose,
                                          std::uint64_t index = 0,
                                          std::uint64_t replica = 0) noexcept {
    std::uint64_t s = seed;
    std::uint64_t k = splitmix64(s);
    s = k ^ (static_cast<std::uint64_t>(purpose) * 0xd1b54a32d192ed03ULL);
    k = splitmix64(s);
    s = k ^ (index * 0xabc98388fb8fac03ULL);
    k = splitmix64(s);
    s = k ^ (replica * 0x8cb92ba72f3d8dd7ULL);
    return splitmix64(s);
}

/// mt19937_64 with platform-independent conversions to doubles and bounded ints.
class Rng {
public:
    explicit Rng(std::uint64_t key) { reseed(key); }

    static Rng stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index = 0,
                      std::uint64_t replica = 0) {
        return Rng(derive_stream_key(seed, purpose, index, replica));
    }

    void reseed(std::uint64_t key) {
        std::uint64_t s = key;
        std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)),
                          static_cast<std::uint32_t>(splitmix64(s)),
                          static_cast<std::uint32_t>(splitmix64(s)),
                          static_cast<std::uint32_t>(splitmix64(s))};
        engine_.seed(seq);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on {0, ..., n-1}; n must be positive. Rejection sampling, unbiased.
    std::size_t uniform_index(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return static_cast<std::size_t>(v % bound);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Index drawn with probability proportional to weights (non-negative, positive sum).
    std::size_t discrete(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform01() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            if (u < weights[i]) return i;
            u -= weights[i];
        }
        // Guard against rounding: fall to the last positive weight.
        for (std::size_t i = weights.size(); i-- > 0;) {
            if (weights[i] > 0.0) return i;
        }
        return 0;
    }

private:
    std::mt19937_64 engine_;
};

static_assert(RandomSource<Rng>);

}  // namespace pottsflow
