#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace xorsat {

/// SplitMix64 finalizer. Used to derive well-separated stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed of stream (a, b) under a base seed; distinct tuples give independent
/// looking streams, so ensembles can be replayed trial-by-trial.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// xoshiro256** seeded through SplitMix64. Satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    bool bit() { return ((*this)() >> 63) != 0; }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace xorsat
