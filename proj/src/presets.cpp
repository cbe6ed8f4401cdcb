#include "tfpsi/presets.hpp"

#include "tfpsi/rng.hpp"

namespace tfpsi {

namespace {

Symbol trig_sum(long n, long degree, Rng& rng, bool real_part) {
    if (degree < 0) throw Error(ErrorKind::config, "trigonometric symbol: degree must be non-negative");
    const RootTable w(n);
    const double norm = 1.0 / static_cast<double>(2 * degree + 1);
    std::vector<std::pair<std::pair<long, long>, cd>> terms;
    for (long a = -degree; a <= degree; ++a) {
        for (long b = -degree; b <= degree; ++b) terms.push_back({{a, b}, rng.complex_normal() * norm});
    }
    Symbol s(n);
    for (long x = 0; x < n; ++x) {
        for (long xi = 0; xi < n; ++xi) {
            cd acc{};
            for (const auto& [ab, c] : terms) acc += c * w(ab.first * x + ab.second * xi);
            s(x, xi) = real_part ? cd(acc.real(), 0.0) : acc;
        }
    }
    return s;
}

}  // namespace

Symbol bump_symbol(long n, double amplitude) {
    require_odd(n, "bump_symbol");
    std::vector<double> p(static_cast<std::size_t>(n));
    for (long t = 0; t < n; ++t) {
        double acc = 0.0;
        for (long m = -5; m <= 5; ++m) {
            const double u = static_cast<double>(t + m * n);
            acc += std::exp(-std::numbers::pi * u * u / static_cast<double>(n));
        }
        p[static_cast<std::size_t>(t)] = acc;
    }
    Symbol s(n);
    for (long x = 0; x < n; ++x) {
        for (long xi = 0; xi < n; ++xi) s(x, xi) = 1.0 + amplitude * p[static_cast<std::size_t>(x)] * p[static_cast<std::size_t>(xi)];
    }
    return s;
}

Symbol trig_poly_symbol(long n, long degree, std::uint64_t seed) {
    Rng rng(seed, 0x7219u);
    return trig_sum(n, degree, rng, true);
}

Symbol random_bandlimited_symbol(long n, long bandwidth, std::uint64_t seed) {
    Rng rng(seed, 0xba5du);
    return trig_sum(n, bandwidth, rng, false);
}

Symbol rough_symbol(long n, std::uint64_t seed) {
    Rng rng(seed, 0x2006u);
    Symbol s(n);
    for (long x = 0; x < n; ++x) {
        for (long xi = 0; xi < n; ++xi) s(x, xi) = rng.complex_normal();
    }
    return s;
}

Signal named_window(const std::string& kind, long n) {
    if (kind == "periodizedGaussian") return periodized_gaussian(n);
    if (kind == "delta") return Signal::delta(n, 0);
    throw Error(ErrorKind::config, "windowKind: unknown window '" + kind + "'");
}

}  // namespace tfpsi
