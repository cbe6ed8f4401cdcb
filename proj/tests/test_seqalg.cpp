#include <doctest.h>

#include "oracles.hpp"
#include "tfpsi/rng.hpp"
#include "tfpsi/seqalg.hpp"

using namespace tfpsi;

namespace {

LatticeSeq random_seq(const PhaseLattice& lat, std::uint64_t seed) {
    Rng rng(seed, 1);
    std::vector<cd> v(lat.size());
    for (auto& x : v) x = rng.complex_normal();
    return LatticeSeq(lat, v);
}

}  // namespace

TEST_SUITE("seqalg") {
    TEST_CASE("lattice validation") {
        CHECK_NOTHROW(PhaseLattice(33, 3, 3));
        CHECK_THROWS_AS(PhaseLattice(32, 2, 2), Error);
        CHECK_THROWS_AS(PhaseLattice(33, 2, 3), Error);
        CHECK_THROWS_AS(PhaseLattice(15, 5, 3), Error);  // αβ = N
        const PhaseLattice lat(33, 3, 1);
        CHECK(lat.rows() == 11);
        CHECK(lat.cols() == 33);
        for (std::size_t i = 0; i < lat.size(); ++i) CHECK(lat.locate(lat.point(i)) == i);
    }

    TEST_CASE("weights") {
        CHECK(WeightSpec::flat().at_radius(7.0) == 1.0);
        CHECK(WeightSpec::polynomial(2).at_radius(3.0) == doctest::Approx(10.0));
        CHECK(WeightSpec::subexponential(0.5, 0.5).at_radius(4.0) == doctest::Approx(std::exp(1.0)));
        // periodic metric: (32, 1) on Z_33 has length √2
        CHECK(WeightSpec::polynomial(2)({32, 1}, 33) == doctest::Approx(3.0));
    }

    TEST_CASE("algebra spec admissibility") {
        const PhaseLattice lat(33, 3, 3);
        CHECK_THROWS_AS(AlgebraSpec::make(WeightSpec::flat(), Exponent::infinity, lat), Error);
        CHECK_THROWS_AS(AlgebraSpec::make(WeightSpec::polynomial(2.0), Exponent::infinity, lat), Error);
        CHECK_NOTHROW(AlgebraSpec::make(WeightSpec::polynomial(2.5), Exponent::infinity, lat));
        CHECK_NOTHROW(AlgebraSpec::make(WeightSpec::subexponential(), Exponent::infinity, lat));
        CHECK_THROWS_AS(AlgebraSpec::make(WeightSpec::subexponential(0.2, 1.0), Exponent::one, lat), Error);
        CHECK_THROWS_AS(AlgebraSpec::make(WeightSpec::polynomial(-1), Exponent::one, lat), Error);
    }

    TEST_CASE("convolution matches direct sum") {
        const PhaseLattice lat(15, 5, 1);
        const auto a = random_seq(lat, 1);
        const auto b = random_seq(lat, 2);
        const auto lib = convolve(a, b);
        const auto ref = oracle::convolve(a, b);
        for (std::size_t i = 0; i < lat.size(); ++i) CHECK(std::abs(lib[i] - ref[i]) < 1e-12);
    }

    TEST_CASE("delta is the convolution unit and involution is an anti-automorphism") {
        const PhaseLattice lat(33, 3, 3);
        const auto a = random_seq(lat, 3);
        const auto b = random_seq(lat, 4);
        const auto e = LatticeSeq::delta(lat, 0);
        const auto ae = convolve(a, e);
        for (std::size_t i = 0; i < lat.size(); ++i) CHECK(std::abs(ae[i] - a[i]) < 1e-14);
        const auto lhs = involute(convolve(a, b));
        const auto rhs = convolve(involute(b), involute(a));
        for (std::size_t i = 0; i < lat.size(); ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-12);
        const auto aa = involute(involute(a));
        for (std::size_t i = 0; i < lat.size(); ++i) CHECK(aa[i] == a[i]);
    }

    TEST_CASE("norms are solid and the algebra bound holds") {
        const PhaseLattice lat(33, 3, 3);
        for (auto spec : {AlgebraSpec::make(WeightSpec::flat(), Exponent::one, lat),
                          AlgebraSpec::make(WeightSpec::polynomial(3), Exponent::one, lat),
                          AlgebraSpec::make(WeightSpec::polynomial(3), Exponent::infinity, lat),
                          AlgebraSpec::make(WeightSpec::subexponential(), Exponent::infinity, lat)}) {
            const auto wc = check_algebra_weight(spec);
            REQUIRE(wc.ok);
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                const auto a = random_seq(lat, 10 + seed);
                const auto b = random_seq(lat, 20 + seed);
                CHECK(algebra_norm(convolve(a, b), spec) <= wc.worst_ratio * algebra_norm(a, spec) * algebra_norm(b, spec) * (1 + 1e-12));
                // solidity: |c| ≤ |a| pointwise ⇒ ‖c‖ ≤ ‖a‖
                LatticeSeq c = a;
                for (std::size_t i = 0; i < c.size(); ++i) c[i] *= 0.5 * (1.0 + std::cos(static_cast<double>(i)));
                CHECK(algebra_norm(c, spec) <= algebra_norm(a, spec));
                CHECK(algebra_norm(involute(a), spec) == doctest::Approx(algebra_norm(a, spec)));
            }
        }
    }

    TEST_CASE("algebra weight constant by exhaustive scan") {
        const PhaseLattice lat(15, 3, 3);
        const auto spec = AlgebraSpec::make(WeightSpec::polynomial(2), Exponent::one, lat);
        double worst = 0.0;
        for (std::size_t i = 0; i < lat.size(); ++i) {
            for (std::size_t j = 0; j < lat.size(); ++j) {
                const auto pi = lat.point(i);
                const auto pj = lat.point(j);
                const PhasePoint s{pi.x + pj.x, pi.xi + pj.xi};
                worst = std::max(worst, spec.weight(s, 15) / (spec.weight(pi, 15) * spec.weight(pj, 15)));
            }
        }
        CHECK(check_algebra_weight(spec).worst_ratio == doctest::Approx(worst).epsilon(1e-14));
        CHECK(check_algebra_weight(AlgebraSpec::make(WeightSpec::flat(), Exponent::one, lat)).worst_ratio == 1.0);
    }

    TEST_CASE("weighted norms") {
        const PhaseLattice lat(15, 3, 3);
        const auto a = LatticeSeq::delta(lat, lat.index(1, 0));
        const auto y = WeightSpec::polynomial(2);
        CHECK(weighted_norm(a, y, LpExponent::one) == doctest::Approx(10.0));
        CHECK(weighted_norm(a, y, LpExponent::two) == doctest::Approx(10.0));
        CHECK(weighted_norm(a, y, LpExponent::infinity) == doctest::Approx(10.0));
    }

    TEST_CASE("GRS profile closed form") {
        const auto p = grs_profile(WeightSpec::polynomial(3), 1, 0, 50);
        REQUIRE(p.size() == 50);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double n = static_cast<double>(i + 1);
            CHECK(p[i] == doctest::Approx(std::pow(1.0 + n * n, 1.5 / n)));
        }
        CHECK(p.back() < 1.3);
        const auto z = grs_profile(WeightSpec::polynomial(3), 0, 0, 5);
        for (double v : z) CHECK(v == 1.0);
        CHECK_THROWS_AS(grs_profile(WeightSpec::flat(), 1, 0, 1), Error);
    }

    TEST_CASE("l1 maximality") {
        std::vector<cd> a{{1, 2}, {0, -1}, {3, 0}};
        const auto r = l1_maximality_check(a, -1, 4096);
        CHECK(r.l1 == doctest::Approx(std::sqrt(5.0) + 4.0));
        CHECK(r.rel_err < 1e-12);
        std::vector<cd> zero(4, cd{});
        const auto z = l1_maximality_check(zero, 0, 128);
        CHECK(z.rel_err == 0.0);
        CHECK_THROWS_AS(l1_maximality_check(a, 0, 10), Error);
    }
}
