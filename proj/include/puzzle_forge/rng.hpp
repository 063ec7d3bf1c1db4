#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace pf {

// SplitMix64. The output stream is a pure function of the seed on every
// platform; reference vectors live in tests/test_rng.cpp.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    // Uniform integer in [0, bound). Rejection sampling, no floating point.
    std::uint64_t next_range(std::uint64_t bound);

    // Uniform integer in [lo, hi].
    std::int64_t next_between(std::int64_t lo, std::int64_t hi);

    // True with probability numerator / denominator.
    bool bernoulli(std::uint64_t numerator, std::uint64_t denominator);

    // Independent child generator; advances this generator by one draw.
    Rng split();

    template <typename T>
    void shuffle(std::span<T> items) {
        // Fisher-Yates from the back; std::shuffle is implementation-defined.
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(next_range(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

Rng rng_from_seed(std::uint64_t seed);

// Finalizer of SplitMix64, usable as a stand-alone 64-bit hash.
std::uint64_t mix64(std::uint64_t x);

// Seed for item `index` of a batch generated from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace pf
