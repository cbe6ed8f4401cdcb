#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfpsi {

using cd = std::complex<double>;

enum class ErrorKind { structural, degenerate, numerical, parse, config };

/// Single exception type for the library. The kind decides the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline constexpr long mod(long a, long n) {
    const long r = a % n;
    return r < 0 ? r + n : r;
}

/// Minimal representative distance |k|_N.
inline constexpr long periodic_abs(long k, long n) {
    const long r = mod(k, n);
    return std::min(r, n - r);
}

/// 2^{-1} mod n for odd n.
inline constexpr long half_mod(long n) { return (n + 1) / 2; }

/// A point of the finite phase plane Z_N x Z_N, canonical representatives in [0, N).
struct PhasePoint {
    long x = 0;
    long xi = 0;

    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

inline PhasePoint reduce(PhasePoint z, long n) { return {mod(z.x, n), mod(z.xi, n)}; }
inline PhasePoint add(PhasePoint a, PhasePoint b, long n) { return {mod(a.x + b.x, n), mod(a.xi + b.xi, n)}; }
inline PhasePoint sub(PhasePoint a, PhasePoint b, long n) { return {mod(a.x - b.x, n), mod(a.xi - b.xi, n)}; }
inline PhasePoint scale(long c, PhasePoint a, long n) { return {mod(c * a.x, n), mod(c * a.xi, n)}; }

/// Symplectic rotation j(ζ1, ζ2) = (ζ2, −ζ1).
inline PhasePoint rotate_j(PhasePoint z, long n) { return {mod(z.xi, n), mod(-z.x, n)}; }
inline PhasePoint rotate_j_inv(PhasePoint z, long n) { return {mod(-z.xi, n), mod(z.x, n)}; }

/// Euclidean combination of the per-coordinate periodic distances.
inline double periodic_norm(PhasePoint z, long n) {
    const double a = static_cast<double>(periodic_abs(z.x, n));
    const double b = static_cast<double>(periodic_abs(z.xi, n));
    return std::hypot(a, b);
}

inline std::size_t flat_index(PhasePoint z, long n) { return static_cast<std::size_t>(z.x * n + z.xi); }
inline PhasePoint from_flat(std::size_t i, long n) {
    return {static_cast<long>(i) / n, static_cast<long>(i) % n};
}

/// Table of N-th roots of unity, w(m) = exp(2πi m/N); indices reduced mod N so phases stay exact.
class RootTable {
public:
    explicit RootTable(long n) : n_(n), w_(static_cast<std::size_t>(n)) {
        for (long m = 0; m < n; ++m) {
            w_[static_cast<std::size_t>(m)] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
        }
    }
    cd operator()(long m) const { return w_[static_cast<std::size_t>(mod(m, n_))]; }
    long n() const { return n_; }

private:
    long n_;
    std::vector<cd> w_;
};

inline void require_odd(long n, const char* what) {
    if (n < 1 || n % 2 == 0) {
        throw Error(ErrorKind::structural, std::string(what) + ": modulus N must be odd and positive, got " + std::to_string(n));
    }
}

}  // namespace tfpsi
