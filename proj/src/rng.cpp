#include "puzzle_forge/rng.hpp"

#include <stdexcept>

namespace pf {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

std::uint64_t Rng::next_range(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_range: bound must be positive");
    // Largest multiple of bound representable; draws above it are rejected.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    std::uint64_t x = next_u64();
    while (x > limit) x = next_u64();
    return x % bound;
}

std::int64_t Rng::next_between(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("next_between: empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_range(span));
}

bool Rng::bernoulli(std::uint64_t numerator, std::uint64_t denominator) {
    if (numerator >= denominator) {
        next_u64();
        return true;
    }
    return next_range(denominator) < numerator;
}

Rng Rng::split() { return Rng(mix64(next_u64() ^ kGolden)); }

Rng rng_from_seed(std::uint64_t seed) { return Rng(seed); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + kGolden * (index + 1)) ^ mix64(index ^ 0xd1b54a32d192ed03ULL);
}

}  // namespace pf
