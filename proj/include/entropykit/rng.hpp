#ifndef ENTROPYKIT_RNG_HPP
#define ENTROPYKIT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace entropykit {

// SplitMix64: the single pseudo-random generator used across the whole
// project so that seeded fixtures can be re-derived in any language.
//
// Update rule (64-bit unsigned arithmetic, wrapping):
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   output = z ^ (z >> 31)
//
// Derived draws:
//   uniform()      = (output >> 11) * 2^-53          in [0, 1)
//   uniform_open() = ((output >> 11) + 1) * 2^-53    in (0, 1]
//   gaussian()     = sqrt(-2 ln u1) * cos(2 pi u2)   with u1 open, u2 half-open
//   below(n)       = floor(uniform() * n), clamped to n - 1
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform_open() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    double gaussian() {
        const double two_pi = 6.283185307179586476925286766559;
        double u1 = uniform_open();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    std::uint64_t below(std::uint64_t n) {
        std::uint64_t k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
        return k >= n ? n - 1 : k;
    }

private:
    std::uint64_t state_;
};

} // namespace entropykit

#endif
