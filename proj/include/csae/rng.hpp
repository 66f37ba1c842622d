#pragma once

#include <array>
#include <cstdint>

namespace csae {

// Seeded, portable PRNG: xoshiro256** with splitmix64 seed expansion.
// Gaussian variates come from the Box-Muller transform (second value cached),
// so identical seeds give identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // uniform in [0, 1), 53-bit resolution
    double uniform();

    // standard normal
    double gaussian();

    // independent substream (consumes one draw from this stream)
    Rng fork();

private:
    std::array<std::uint64_t, 4> s_{};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace csae
