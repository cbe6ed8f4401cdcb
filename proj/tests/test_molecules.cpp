#include <doctest.h>

#include "oracles.hpp"
#include "tfpsi/molecules.hpp"
#include "tfpsi/presets.hpp"

using namespace tfpsi;

namespace {

// ψ_{k,l} sampled straight from its definition and periodized by explicit wrapping sums.
std::vector<cd> sine_direct(const BellSpec& spec, long bells, long k, long l) {
    const double period = spec.alpha * static_cast<double>(bells);
    const auto m = static_cast<std::size_t>(std::llround(period / spec.grid_step));
    std::vector<cd> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (long w = -2; w <= 2; ++w) {
            const double s = static_cast<double>(j) * spec.grid_step - spec.alpha * static_cast<double>(k) + static_cast<double>(w) * period;
            acc += std::sqrt(2.0 / spec.alpha) * spec.bell(s) * std::sin((2.0 * static_cast<double>(l) + 1.0) * std::numbers::pi * s / (2.0 * spec.alpha));
        }
        out[j] = acc;
    }
    return out;
}

}  // namespace

TEST_SUITE("molecules") {
    TEST_CASE("bell profile") {
        const BellSpec spec;
        // θ is the running integral of ζ
        const int steps = 20000;
        double integral = 0.0;
        const double h = 2.0 * spec.epsilon / steps;
        for (int i = 0; i < steps; ++i) {
            const double t = -spec.epsilon + (i + 0.5) * h;
            integral += spec.zeta(t) * h;
            if (i % 2000 == 1999) CHECK(spec.theta(t + 0.5 * h) == doctest::Approx(integral).epsilon(1e-6));
        }
        CHECK(spec.theta(spec.epsilon) == doctest::Approx(std::numbers::pi / 2));
        // b(t)² + b(−t)² = 1 across the left overlap
        for (double t = -spec.epsilon; t <= spec.epsilon; t += spec.epsilon / 17) {
            CHECK(std::norm(spec.bell(t)) + std::norm(spec.bell(-t)) == doctest::Approx(1.0).epsilon(1e-13));
        }
        CHECK(spec.bell(-spec.epsilon - 0.01) == 0.0);
        CHECK(spec.bell(spec.alpha / 2) == doctest::Approx(1.0));
        BellSpec bad;
        bad.epsilon = 0.6;
        CHECK_THROWS_AS(bad.validate(), Error);
    }

    TEST_CASE("local sine basis matches direct samples and is orthonormal") {
        const BellSpec spec;
        std::vector<std::vector<cd>> direct;
        for (long k = 0; k < 4; ++k) {
            for (long l = 0; l <= 6; ++l) {
                const auto lib = local_sine(spec, 4, k, l);
                auto ref = sine_direct(spec, 4, k, l);
                double err = 0.0;
                for (std::size_t j = 0; j < ref.size(); ++j) err = std::max(err, std::abs(lib.samples[j] - ref[j]));
                CHECK(err < 1e-12);
                direct.push_back(std::move(ref));
            }
        }
        double gram = 0.0;
        for (std::size_t a = 0; a < direct.size(); ++a) {
            for (std::size_t b = 0; b < direct.size(); ++b) {
                const cd g = oracle::dot(direct[a], direct[b]) * spec.grid_step;
                gram = std::max(gram, std::abs(g - (a == b ? 1.0 : 0.0)));
            }
        }
        CHECK(gram < 1e-5);
        CHECK_THROWS_AS(local_sine_basis(spec, 3, 4), Error);
    }

    TEST_CASE("kompost decomposition") {
        const BellSpec spec;
        for (long k = 0; k < 4; ++k) {
            for (long l : {0L, 1L, 7L, 15L}) CHECK(kompost_decompose(spec, 4, k, l).max_point_err < 1e-12);
        }
    }

    TEST_CASE("Weyl quadrature of multiplication symbols") {
        const BellSpec spec;
        const SampledFunction f = local_sine(spec, 4, 1, 3);
        const SampledFunction two = weyl_apply(TrigSymbol::constant(2.0), f);
        const SampledFunction cosf = weyl_apply(TrigSymbol::cosine(1), f);
        for (std::size_t j = 0; j < f.size(); j += 37) {
            CHECK(std::abs(two.samples[j] - 2.0 * f.samples[j]) < 1e-12);
            const double c = std::cos(2.0 * std::numbers::pi * f.t(j) / f.period);
            CHECK(std::abs(cosf.samples[j] - c * f.samples[j]) < 1e-12);
        }
    }

    TEST_CASE("sine basis matrix of a smooth symbol") {
        const BellSpec spec;
        const auto rep = sine_basis_almost_diag(TrigSymbol::cosine(1), spec, 4, 7, {2, 3, 4});
        CHECK(rep.symmetry_defect < 1e-10);
        for (const auto& r : rep.rows) CHECK(std::isfinite(r.c_s));
        BellSpec coarse;
        coarse.grid_step = 0.125;
        CHECK_THROWS_AS(sine_basis_almost_diag(TrigSymbol::cosine(1), coarse, 4, 7, {2}), Error);
    }

    TEST_CASE("molecule families and their bounds") {
        const GaborSystem sys = tighten(periodized_gaussian(15), PhaseLattice(15, 3, 3));
        const auto fam = make_molecules(sys, 1.5, 4.0, 3);
        const auto& lat = sys.lattice();
        REQUIRE(fam.members.size() == lat.size());
        for (std::size_t mu = 0; mu < lat.size(); ++mu) {
            const auto e = oracle::as_vec(fam.members[mu]);
            for (std::size_t lam = 0; lam < lat.size(); ++lam) {
                const PhasePoint p = lat.point(lam);
                const cd c = oracle::dot(e, oracle::shift(sys.window(), p.x, p.xi));
                CHECK(std::abs(c) <= std::abs(fam.bound[lat.sub(lam, mu)]) * (1 + 1e-12));
            }
        }
        CHECK(fam.decay_constant == doctest::Approx(1.0).epsilon(1e-12));
        CHECK_THROWS_AS(make_molecules(sys, 1.0, 2.0, 1), Error);

        const auto spec = AlgebraSpec::make(WeightSpec::polynomial(4), Exponent::infinity, lat);
        const auto other = make_molecules(sys, 1.5, 4.0, 4);
        const auto rep = molecule_almost_diag(bump_symbol(15, 0.3), sys, fam, other, spec);
        CHECK(rep.ok);
        CHECK(rep.max_violation <= 1e-10);
    }
}
