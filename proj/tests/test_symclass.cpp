#include <doctest.h>

#include "oracles.hpp"
#include "tfpsi/aldiag.hpp"
#include "tfpsi/presets.hpp"
#include "tfpsi/symclass.hpp"
#include "tfpsi/weyl.hpp"

using namespace tfpsi;

TEST_SUITE("symclass") {
    TEST_CASE("grand symbol is the maximum over positions") {
        const long n = 9;
        const Symbol s = random_bandlimited_symbol(n, 2, 3);
        const Symbol phi = periodized_gaussian_2d(n);
        const GrandSymbol g = grand_symbol(s, phi, "gauss");
        for (long a = 0; a < n; a += 2) {
            for (long b = 0; b < n; b += 3) {
                double ref = 0.0;
                for (long z1 = 0; z1 < n; ++z1) {
                    for (long z2 = 0; z2 < n; ++z2) ref = std::max(ref, std::abs(oracle::stft2(s, phi, {z1, z2}, {a, b})));
                }
                CHECK(g({a, b}) == doctest::Approx(ref).epsilon(1e-12));
            }
        }
        CHECK(g.window_id == "gauss");
    }

    TEST_CASE("local suprema and amalgam norm") {
        const PhaseLattice lat(15, 3, 3);
        Eigen::MatrixXd f = Eigen::MatrixXd::Zero(15, 15);
        f(4, 5) = 2.0;  // inside the box of lattice point (3, 3)
        f(0, 0) = 1.0;
        const LatticeSeq a = local_suprema(f, lat);
        CHECK(std::abs(a[lat.index(1, 1)]) == 2.0);
        CHECK(std::abs(a[lat.index(0, 0)]) == 1.0);
        const auto spec = AlgebraSpec::make(WeightSpec::flat(), Exponent::one, lat);
        CHECK(amalgam_norm(f, lat, spec) == doctest::Approx(3.0));
    }

    TEST_CASE("rotation by j") {
        GrandSymbol g{Eigen::MatrixXd::Zero(9, 9), "x"};
        g.values(2, 0) = 1.0;
        const Eigen::MatrixXd r = rotate_grand(g);  // r(ζ) = g(j(ζ)), j(0, 2) = (2, 0)
        CHECK(r(0, 2) == 1.0);
        CHECK(r.sum() == 1.0);
    }

    TEST_CASE("smooth symbols have small class norms, rough ones large") {
        const PhaseLattice lat(15, 3, 3);
        const auto spec = AlgebraSpec::make(WeightSpec::polynomial(3), Exponent::infinity, lat);
        const Signal g = periodized_gaussian(15);
        const double smooth = sjostrand_norm(bump_symbol(15, 0.3), g, spec).sjostrand_norm;
        const double rough = sjostrand_norm(rough_symbol(15, 1), g, spec).sjostrand_norm;
        CHECK(smooth > 0.0);
        CHECK(rough > smooth);
        const auto rep = sjostrand_norm(bump_symbol(15, 0.3), g, spec, smooth * 2);
        CHECK(rep.member);
    }

    TEST_CASE("window independence gives a finite ratio") {
        const PhaseLattice lat(15, 3, 3);
        const auto spec = AlgebraSpec::make(WeightSpec::flat(), Exponent::one, lat);
        const auto r = window_independence_check(random_bandlimited_symbol(15, 2, 1), periodized_gaussian(15), random_signal(15, 1, 0), spec);
        CHECK(std::isfinite(r.ratio));
        CHECK(r.ratio > 0.0);
    }

    TEST_CASE("modulation space norm of a constant symbol") {
        // σ ≡ 1: |V_Φ1(z, ζ)| = |Φ̂(ζ)| for every z
        const long n = 15;
        const Symbol s = Symbol::constant(n, 1.0);
        const Symbol phi = periodized_gaussian_2d(n);
        const auto y = WeightSpec::polynomial(4);
        double sum = 0.0, sup = 0.0;
        for (long a = 0; a < n; ++a) {
            for (long b = 0; b < n; ++b) {
                const double v = std::abs(oracle::stft2(s, phi, {0, 0}, {a, b}));
                sum += v;
                sup = std::max(sup, v * y({a, b}, n));
            }
        }
        CHECK(modspace_norm(s, Exponent::one, WeightSpec::flat()) == doctest::Approx(sum).epsilon(1e-10));
        CHECK(modspace_norm(s, Exponent::infinity, y) == doctest::Approx(sup).epsilon(1e-10));
    }

    TEST_CASE("Hormander profile rows") {
        const auto rep = hormander_profile(trig_poly_symbol(15, 2, 1), periodized_gaussian(15), {0, 2, 4});
        REQUIRE(rep.rows.size() == 3);
        for (const auto& r : rep.rows) CHECK(std::isfinite(r.c_s));
        CHECK(rep.rows[0].c_s <= rep.rows[2].c_s);
        CHECK(rep.envelope.size() == 225);
    }
}
