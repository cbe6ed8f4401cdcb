#pragma once

// Seeded symbol families and standard windows.

#include <cstdint>
#include <string>

#include "tfpsi/phase.hpp"

namespace tfpsi {

/// 1 + amplitude·p(x)p(ξ), p(t) = Σ_{|m|≤5} e^{−π(t+mN)²/N}.
Symbol bump_symbol(long n, double amplitude);

/// Real trigonometric polynomial Re Σ_{|a|,|b|≤degree} c_ab e^{2πi(ax + bξ)/N}, c_ab complex normal/(2d+1).
Symbol trig_poly_symbol(long n, long degree, std::uint64_t seed);

/// Complex bandlimited symbol, same sum without taking the real part.
Symbol random_bandlimited_symbol(long n, long bandwidth, std::uint64_t seed);

/// iid complex normal entries.
Symbol rough_symbol(long n, std::uint64_t seed);

/// Named window: "periodizedGaussian" or "delta".
Signal named_window(const std::string& kind, long n);

}  // namespace tfpsi
