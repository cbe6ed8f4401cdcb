#pragma once

// Direct-summation reference implementations used only by the tests. They follow the defining sums
// term by term and share no code path with the library beyond the Signal/Symbol containers.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "tfpsi/cdmat.hpp"
#include "tfpsi/phase.hpp"

namespace oracle {

using cd = std::complex<double>;

inline long md(long a, long n) { return ((a % n) + n) % n; }

inline cd expi(double num, long n) { return std::polar(1.0, 2.0 * std::numbers::pi * num / static_cast<double>(n)); }

inline long half(long n) { return (n + 1) / 2; }

/// (π(x,ξ)f)(t) = e^{2πiξt/N} f(t − x)
inline std::vector<cd> shift(const tfpsi::Signal& f, long x, long xi) {
    const long n = f.n();
    std::vector<cd> out(static_cast<std::size_t>(n));
    for (long t = 0; t < n; ++t) out[static_cast<std::size_t>(t)] = expi(static_cast<double>(md(xi * t, n)), n) * f.values()(md(t - x, n));
    return out;
}

/// ⟨u, v⟩ = Σ u conj(v)
inline cd dot(const std::vector<cd>& u, const std::vector<cd>& v) {
    cd acc{};
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * std::conj(v[i]);
    return acc;
}

inline std::vector<cd> as_vec(const tfpsi::Signal& f) { return {f.values().data(), f.values().data() + f.n()}; }

/// V_g f(x, ξ) = Σ_t f(t) conj(g(t − x)) e^{−2πiξt/N}
inline cd stft(const tfpsi::Signal& f, const tfpsi::Signal& g, long x, long xi) {
    const long n = f.n();
    cd acc{};
    for (long t = 0; t < n; ++t) acc += f.values()(t) * std::conj(g.values()(md(t - x, n))) * expi(-static_cast<double>(md(xi * t, n)), n);
    return acc;
}

/// W(f,g)(x, ξ) = Σ_t f(x + ht) conj(g(x − ht)) e^{−2πitξ/N}
inline cd wigner(const tfpsi::Signal& f, const tfpsi::Signal& g, long x, long xi) {
    const long n = f.n();
    const long h = half(n);
    cd acc{};
    for (long t = 0; t < n; ++t) {
        acc += f.values()(md(x + h * t, n)) * std::conj(g.values()(md(x - h * t, n))) * expi(-static_cast<double>(md(t * xi, n)), n);
    }
    return acc;
}

/// Kernel of σ^w: T(x, y) = (1/N) Σ_ξ σ(h(x + y), ξ) e^{2πi(x − y)ξ/N}
inline Eigen::MatrixXcd weyl_kernel(const tfpsi::Symbol& s) {
    const long n = s.n();
    const long h = half(n);
    Eigen::MatrixXcd t(n, n);
    for (long x = 0; x < n; ++x) {
        for (long y = 0; y < n; ++y) {
            cd acc{};
            for (long xi = 0; xi < n; ++xi) acc += s.values()(md(h * (x + y), n), xi) * expi(static_cast<double>(md((x - y) * xi, n)), n);
            t(x, y) = acc / static_cast<double>(n);
        }
    }
    return t;
}

/// Symbol of a kernel: σ(u, ξ) = Σ_r T(u + hr, u − hr) e^{−2πirξ/N}
inline Eigen::MatrixXcd weyl_symbol(const Eigen::MatrixXcd& t) {
    const long n = t.rows();
    const long h = half(n);
    Eigen::MatrixXcd s(n, n);
    for (long u = 0; u < n; ++u) {
        for (long xi = 0; xi < n; ++xi) {
            cd acc{};
            for (long r = 0; r < n; ++r) acc += t(md(u + h * r, n), md(u - h * r, n)) * expi(-static_cast<double>(md(r * xi, n)), n);
            s(u, xi) = acc;
        }
    }
    return s;
}

/// ⟨T π(z)g, π(w)g⟩
inline cd matrix_element(const Eigen::MatrixXcd& t, const tfpsi::Signal& g, tfpsi::PhasePoint w, tfpsi::PhasePoint z) {
    const auto pz = shift(g, z.x, z.xi);
    const auto pw = shift(g, w.x, w.xi);
    std::vector<cd> tp(pz.size(), cd{});
    for (std::size_t a = 0; a < pz.size(); ++a) {
        for (std::size_t b = 0; b < pz.size(); ++b) tp[a] += t(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * pz[b];
    }
    return dot(tp, pw);
}

/// V_Φσ(z, ζ) = Σ_u σ(u) conj(Φ(u − z)) e^{−2πi(ζ₁u₁ + ζ₂u₂)/N}
inline cd stft2(const tfpsi::Symbol& s, const tfpsi::Symbol& phi, tfpsi::PhasePoint z, tfpsi::PhasePoint zeta) {
    const long n = s.n();
    cd acc{};
    for (long u1 = 0; u1 < n; ++u1) {
        for (long u2 = 0; u2 < n; ++u2) {
            acc += s.values()(u1, u2) * std::conj(phi.values()(md(u1 - z.x, n), md(u2 - z.xi, n))) *
                   expi(-static_cast<double>(md(zeta.x * u1 + zeta.xi * u2, n)), n);
        }
    }
    return acc;
}

/// Frame operator Σ_λ π(λ)g ⊗ conj(π(λ)g)
inline Eigen::MatrixXcd frame_operator(const tfpsi::Signal& g, const tfpsi::PhaseLattice& lat) {
    const long n = g.n();
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
    for (long k = 0; k < lat.rows(); ++k) {
        for (long l = 0; l < lat.cols(); ++l) {
            const auto a = shift(g, k * lat.alpha(), l * lat.beta());
            for (long p = 0; p < n; ++p) {
                for (long q = 0; q < n; ++q) s(p, q) += a[static_cast<std::size_t>(p)] * std::conj(a[static_cast<std::size_t>(q)]);
            }
        }
    }
    return s;
}

/// (a ∗ b)(k, l) = Σ a(k', l') b(k − k', l − l') on the lattice index torus.
inline std::vector<cd> convolve(const tfpsi::LatticeSeq& a, const tfpsi::LatticeSeq& b) {
    const auto& lat = a.lattice();
    const long r = lat.rows();
    const long c = lat.cols();
    std::vector<cd> out(lat.size(), cd{});
    for (long k = 0; k < r; ++k) {
        for (long l = 0; l < c; ++l) {
            cd acc{};
            for (long k2 = 0; k2 < r; ++k2) {
                for (long l2 = 0; l2 < c; ++l2) acc += a[static_cast<std::size_t>(k2 * c + l2)] * b[static_cast<std::size_t>(md(k - k2, r) * c + md(l - l2, c))];
            }
            out[static_cast<std::size_t>(k * c + l)] = acc;
        }
    }
    return out;
}

/// d(ν) = max_λ |A_{λ, λ−ν}|
inline std::vector<double> envelope(const Eigen::MatrixXcd& m, const tfpsi::PhaseLattice& lat) {
    const long r = lat.rows();
    const long c = lat.cols();
    std::vector<double> d(lat.size(), 0.0);
    for (long k = 0; k < r; ++k) {
        for (long l = 0; l < c; ++l) {
            for (long nk = 0; nk < r; ++nk) {
                for (long nl = 0; nl < c; ++nl) {
                    const long row = k * c + l;
                    const long col = md(k - nk, r) * c + md(l - nl, c);
                    auto& slot = d[static_cast<std::size_t>(nk * c + nl)];
                    slot = std::max(slot, std::abs(m(row, col)));
                }
            }
        }
    }
    return d;
}

}  // namespace oracle
