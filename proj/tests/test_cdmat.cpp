#include <doctest.h>

#include <Eigen/QR>

#include "oracles.hpp"
#include "tfpsi/cdmat.hpp"
#include "tfpsi/rng.hpp"

using namespace tfpsi;

TEST_SUITE("cdmat") {
    TEST_CASE("envelope matches direct maximum") {
        const PhaseLattice lat(15, 5, 1);
        Rng rng(5, 0);
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(lat.size()), static_cast<Eigen::Index>(lat.size()));
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.complex_normal();
        const auto lib = envelope(m, lat);
        const auto ref = oracle::envelope(m, lat);
        for (std::size_t i = 0; i < lat.size(); ++i) CHECK(std::abs(lib[i]) == doctest::Approx(ref[i]));
    }

    TEST_CASE("circulant envelope is |a| and identity has envelope delta") {
        const PhaseLattice lat(33, 3, 3);
        Rng rng(1, 2);
        std::vector<cd> v(lat.size());
        for (auto& x : v) x = rng.complex_normal();
        const LatticeSeq a(lat, v);
        const auto c = CDMatrix::circulant(a);
        for (std::size_t i = 0; i < lat.size(); ++i) CHECK(std::abs(c.envelope()[i]) == doctest::Approx(std::abs(a[i])));
        const auto e = CDMatrix::identity(lat).envelope();
        CHECK(std::abs(e[0]) == 1.0);
        for (std::size_t i = 1; i < lat.size(); ++i) CHECK(e[i] == cd{});
    }

    TEST_CASE("envelope of a product is dominated by the convolution") {
        const PhaseLattice lat(33, 3, 3);
        for (std::uint64_t s = 0; s < 5; ++s) {
            const auto a = synthetic_jaffard(lat, 3.0, 2 * s, 0.5);
            const auto b = synthetic_jaffard(lat, 3.0, 2 * s + 1, 0.5);
            const auto rep = envelope_product_bound(a, b);
            CHECK(rep.max_violation <= 1e-12 * rep.scale);
        }
    }

    TEST_CASE("apply obeys the convolution bound") {
        const PhaseLattice lat(33, 3, 3);
        const auto spec = AlgebraSpec::make(WeightSpec::polynomial(3), Exponent::infinity, lat);
        const auto a = synthetic_jaffard(lat, 4.0, 9);
        Rng rng(3, 3);
        std::vector<cd> v(lat.size());
        for (auto& x : v) x = rng.complex_normal();
        const auto [ac, rep] = apply(a, LatticeSeq(lat, v), spec);
        CHECK(rep.ok);
        const Eigen::VectorXcd ref = a.entries() * Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < lat.size(); ++i) CHECK(std::abs(ac[i] - ref(static_cast<Eigen::Index>(i))) < 1e-12);
    }

    TEST_CASE("pinv agrees with a complete orthogonal decomposition") {
        Rng rng(4, 4);
        Eigen::MatrixXcd a(12, 8);
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.complex_normal();
        a.col(7) = a.col(0) + a.col(1);  // rank deficient
        const Eigen::MatrixXcd p = pinv(a, 1e-10);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
        cod.setThreshold(1e-10);
        CHECK((p - cod.pseudoInverse()).norm() < 1e-10 * p.norm());
        CHECK((a * p * a - a).norm() < 1e-10 * a.norm());
        CHECK(pinv(Eigen::MatrixXcd::Zero(3, 3)).norm() == 0.0);
        CHECK_THROWS_AS(pinv(a, 0.5), Error);
    }

    TEST_CASE("decay fit recovers a planted exponent") {
        const PhaseLattice lat(33, 3, 3);
        LatticeSeq d(lat);
        for (std::size_t i = 0; i < lat.size(); ++i) {
            const double r = lat.length(i);
            d[i] = 2.0 * std::pow(1.0 + r * r, -2.5);
        }
        const auto fit = decay_fit(d);
        CHECK(fit.s_hat == doctest::Approx(5.0).epsilon(1e-9));
        CHECK(fit.c_hat == doctest::Approx(2.0).epsilon(1e-9));
        CHECK_THROWS_AS(decay_fit(LatticeSeq::delta(lat, 0)), Error);
    }

    TEST_CASE("inverse of I + K keeps polynomial decay") {
        const PhaseLattice lat(33, 3, 3);
        const auto a = synthetic_jaffard(lat, 4.0, 11, 0.1);
        for (std::size_t i = 0; i < lat.size(); ++i) {
            if (i == 0) continue;
            const double r = lat.length(i);
            CHECK(std::abs(a.envelope()[i]) <= 0.1 * std::pow(1.0 + r * r, -2.0) * (1 + 1e-12));
        }
        const auto fit = decay_fit(pinv(a).envelope());
        CHECK(fit.s_hat >= 3.5);
    }

    TEST_CASE("diagonal Fourier series reproduces the matrix") {
        const PhaseLattice lat(15, 3, 3);
        const auto a = synthetic_jaffard(lat, 3.0, 2);
        CHECK(diagonal_fourier_check(a, 15).max_err < 1e-10);
        CHECK_THROWS_AS(diagonal_fourier_check(a, 7), Error);
    }
}
