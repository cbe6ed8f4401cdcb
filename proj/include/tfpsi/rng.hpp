#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace tfpsi {

/// Counter-based SplitMix64 stream.
///
/// Draw number i of stream (seed, stream) is splitmix64(key + (i + 1) * 0x9E3779B97F4A7C15)
/// where key = splitmix64(seed ^ splitmix64(stream)). Any language with 64-bit unsigned
/// arithmetic reproduces the same numbers, and streams can be addressed without replay.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(seed ^ mix(stream))) {}

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() {
        ++counter_;
        return mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    long integer(long lo, long hi) {  // inclusive range
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(next() % span);
    }

    /// Standard normal via Box-Muller; consumes two draws per value.
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

    std::complex<double> unimodular() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace tfpsi
