#include <doctest.h>

#include "oracles.hpp"
#include "tfpsi/aldiag.hpp"
#include "tfpsi/phase.hpp"
#include "tfpsi/presets.hpp"
#include "tfpsi/weyl.hpp"

using namespace tfpsi;

TEST_SUITE("phase") {
    TEST_CASE("time-frequency shift matches the defining formula") {
        const Signal f = random_signal(15, 1, 0);
        const Signal s = tf_shift({4, 7}, f);
        const auto ref = oracle::shift(f, 4, 7);
        for (long t = 0; t < 15; ++t) CHECK(std::abs(s[t] - ref[static_cast<std::size_t>(t)]) < 1e-13);
    }

    TEST_CASE("STFT against direct summation") {
        for (long n : {9L, 15L}) {
            const Signal f = random_signal(n, 2, 0);
            const Signal g = random_signal(n, 2, 1);
            const Eigen::MatrixXcd v = stft(f, g);
            for (long x = 0; x < n; ++x) {
                for (long xi = 0; xi < n; ++xi) CHECK(std::abs(v(x, xi) - oracle::stft(f, g, x, xi)) < 1e-12);
            }
        }
        CHECK_THROWS_AS(stft(Signal(9), Signal(9)), Error);
        CHECK_THROWS_AS(stft(Signal(9), Signal(15)), Error);
    }

    TEST_CASE("STFT orthogonality relation") {
        // Σ_z V_g1 f1 conj(V_g2 f2) = N ⟨f1, f2⟩ conj⟨g1, g2⟩
        const long n = 15;
        const Signal f1 = random_signal(n, 3, 0), f2 = random_signal(n, 3, 1);
        const Signal g1 = random_signal(n, 3, 2), g2 = random_signal(n, 3, 3);
        const cd lhs = (stft(f1, g1).array() * stft(f2, g2).conjugate().array()).sum();
        const cd rhs = static_cast<double>(n) * inner(f1, f2) * std::conj(inner(g1, g2));
        CHECK(std::abs(lhs - rhs) < 1e-11 * std::abs(rhs));
    }

    TEST_CASE("Wigner distribution against direct summation") {
        const long n = 15;
        const Signal f = random_signal(n, 4, 0);
        const Signal g = random_signal(n, 4, 1);
        const Symbol w = wigner(f, g);
        for (long x = 0; x < n; ++x) {
            for (long xi = 0; xi < n; ++xi) CHECK(std::abs(w(x, xi) - oracle::wigner(f, g, x, xi)) < 1e-12);
        }
        // W(f,f) is real
        CHECK(wigner(f, f).values().imag().cwiseAbs().maxCoeff() < 1e-12);
    }

    TEST_CASE("symbol STFT against direct summation") {
        const long n = 9;
        const Symbol s = random_bandlimited_symbol(n, 2, 5);
        const Symbol phi = weyl_window(periodized_gaussian(n));
        const SymbolStft v = stft2(s, phi);
        for (long z1 = 0; z1 < n; z1 += 2) {
            for (long z2 = 0; z2 < n; z2 += 3) {
                for (long a = 0; a < n; ++a) {
                    for (long b = 0; b < n; ++b) {
                        CHECK(std::abs(v({z1, z2}, {a, b}) - oracle::stft2(s, phi, {z1, z2}, {a, b})) < 1e-11);
                    }
                }
            }
        }
    }

    TEST_CASE("frame operator against direct sum and tight window") {
        const PhaseLattice lat(15, 3, 3);
        const Signal g = periodized_gaussian(15);
        CHECK((frame_operator(g, lat) - oracle::frame_operator(g, lat)).norm() < 1e-11);
        const GaborSystem sys = tighten(g, lat);
        CHECK(sys.tight());
        CHECK((oracle::frame_operator(sys.window(), lat) - Eigen::MatrixXcd::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-12);
    }

    TEST_CASE("Parseval and reconstruction on the default lattice") {
        const GaborSystem sys = tighten(periodized_gaussian(33), PhaseLattice(33, 3, 3));
        for (std::uint64_t i = 0; i < 20; ++i) {
            const Signal f = random_signal(33, 77, i);
            const LatticeSeq c = analysis(sys, f);
            double e = 0.0;
            for (const auto& v : c.values()) e += std::norm(v);
            CHECK(std::abs(e - f.values().squaredNorm()) <= 1e-10 * f.values().squaredNorm());
            CHECK((synthesis(sys, c).values() - f.values()).norm() <= 1e-10 * f.norm());
        }
    }

    TEST_CASE("delta window: frame only when every position is hit") {
        CHECK_THROWS_AS(tighten(Signal::delta(15), PhaseLattice(15, 3, 1)), Error);
        CHECK(tighten(Signal::delta(15), PhaseLattice(15, 1, 3)).tight());
    }

    TEST_CASE("magic formula") {
        CHECK(magic_formula_check(periodized_gaussian(15)).max_rel_err < 1e-10);
        CHECK(magic_formula_check(random_signal(9, 1, 1)).max_rel_err < 1e-10);
    }
}

TEST_SUITE("weyl") {
    TEST_CASE("quantize against the kernel formula") {
        const Symbol s = random_bandlimited_symbol(15, 3, 8);
        CHECK((quantize(s).entries() - oracle::weyl_kernel(s)).cwiseAbs().maxCoeff() < 1e-12);
    }

    TEST_CASE("quantize and dequantize are inverse") {
        const Symbol s = rough_symbol(15, 3);
        CHECK((dequantize(quantize(s)).values() - s.values()).cwiseAbs().maxCoeff() < 1e-12);
        const Signal f = random_signal(15, 9, 0);
        const Signal g = random_signal(15, 9, 1);
        const OperatorMatrix op = OperatorMatrix::outer(f, g);
        CHECK((dequantize(op).values() - oracle::weyl_symbol(op.entries())).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((dequantize(op).values() - wigner(f, g).values()).cwiseAbs().maxCoeff() < 1e-12);
    }

    TEST_CASE("constant symbol quantizes to the identity") {
        CHECK((quantize(Symbol::constant(15, 1.0)).entries() - Eigen::MatrixXcd::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-14);
    }

    TEST_CASE("twisted product is the symbol of the composition") {
        const Symbol s = random_bandlimited_symbol(15, 3, 1);
        const Symbol t = random_bandlimited_symbol(15, 3, 2);
        const Eigen::MatrixXcd comp = oracle::weyl_kernel(s) * oracle::weyl_kernel(t);
        CHECK((twisted_product(s, t).values() - oracle::weyl_symbol(comp)).cwiseAbs().maxCoeff() < 1e-11);
    }

    TEST_CASE("real symbols give self-adjoint operators") {
        const Symbol s = trig_poly_symbol(15, 2, 4);
        const Eigen::MatrixXcd t = quantize(s).entries();
        CHECK((t - t.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    }

    TEST_CASE("full matrix elements against direct inner products") {
        const long n = 9;
        const Symbol s = random_bandlimited_symbol(n, 2, 6);
        const Signal g = periodized_gaussian(n);
        const Eigen::MatrixXcd e = full_matrix_elements(s, g);
        const Eigen::MatrixXcd t = oracle::weyl_kernel(s);
        for (std::size_t w = 0; w < static_cast<std::size_t>(n * n); w += 5) {
            for (std::size_t z = 0; z < static_cast<std::size_t>(n * n); z += 7) {
                const cd ref = oracle::matrix_element(t, g, from_flat(w, n), from_flat(z, n));
                CHECK(std::abs(e(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(z)) - ref) < 1e-11);
            }
        }
    }

    TEST_CASE("covariance identity with direct symbol STFT") {
        // |⟨σ^w π(z)g, π(w)g⟩| = |V_Φσ(h(w+z), j(w−z))| with Φ = W(g,g)/N
        const long n = 9;
        const long h = (n + 1) / 2;
        const Symbol s = random_bandlimited_symbol(n, 2, 7);
        const Signal g = random_signal(n, 7, 1);
        Symbol phi = wigner(g, g);
        phi *= 1.0 / static_cast<double>(n);
        const Eigen::MatrixXcd t = oracle::weyl_kernel(s);
        for (long a = 0; a < n * n; a += 4) {
            for (long b = 0; b < n * n; b += 5) {
                const PhasePoint w = from_flat(static_cast<std::size_t>(a), n);
                const PhasePoint z = from_flat(static_cast<std::size_t>(b), n);
                const PhasePoint u{h * (w.x + z.x), h * (w.xi + z.xi)};
                const PhasePoint v{w.xi - z.xi, -(w.x - z.x)};
                const double lhs = std::abs(oracle::matrix_element(t, g, w, z));
                const double rhs = std::abs(oracle::stft2(s, phi, u, v));
                CHECK(std::abs(lhs - rhs) < 1e-11);
            }
        }
        CHECK(covariance_check(s, g).max_rel_err < 1e-9);
    }
}
