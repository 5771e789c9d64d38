#ifndef MIXLAB_RNG_HPP
#define MIXLAB_RNG_HPP

#include <cmath>
#include <cstdint>

#include "mixlab/common.hpp"

namespace mixlab {

// Counter-based generator: every variate is addressed by
// (seed, stream, draw index, slot) and can be produced out of order,
// so parallel workers get reproducible non-overlapping substreams.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t draw, std::uint64_t slot) {
    std::uint64_t h = splitmix64(seed ^ 0x243f6a8885a308d3ULL);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ draw);
    h = splitmix64(h ^ slot);
    return h;
}

// uniform in (0, 1]
inline double uniform_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Standard complex Gaussian: independent N(0, 1/2) real and imaginary
// parts, so E|g|^2 = 1.
inline complex gaussian(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t draw, std::uint64_t slot) {
    double u1 = uniform_open(counter_bits(seed, stream, draw, 2 * slot));
    double u2 = uniform_open(counter_bits(seed, stream, draw, 2 * slot + 1));
    double r = std::sqrt(-std::log(u1));
    return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
}

// Real standard normal, for utility sampling in tests and experiments.
inline double normal(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t draw, std::uint64_t slot) {
    double u1 = uniform_open(counter_bits(seed, stream, draw, 2 * slot));
    double u2 = uniform_open(counter_bits(seed, stream, draw, 2 * slot + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

inline double uniform(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t draw, std::uint64_t slot) {
    return uniform_open(counter_bits(seed, stream, draw, slot));
}

}  // namespace rng
}  // namespace mixlab

#endif
