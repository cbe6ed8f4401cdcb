#include "tfpsi/symclass.hpp"

#include "tfpsi/parallel.hpp"

namespace tfpsi {

namespace {

Eigen::Index ix(long i) { return static_cast<Eigen::Index>(i); }

}  // namespace

GrandSymbol grand_symbol(const Symbol& sigma, const Symbol& phi, std::string window_id) {
    const long n = sigma.n();
    const auto nn = static_cast<std::size_t>(n * n);
    // One N×N slab of moduli per z, reduced afterwards; max is order independent.
    std::vector<Eigen::MatrixXd> slabs(nn);
    stft2_visit(sigma, phi, [&](PhasePoint z, const Eigen::MatrixXcd& block) {
        slabs[flat_index(z, n)] = block.cwiseAbs();
    });
    GrandSymbol g{Eigen::MatrixXd::Zero(ix(n), ix(n)), std::move(window_id)};
    for (const auto& s : slabs) g.values = g.values.cwiseMax(s);
    return g;
}

LatticeSeq local_suprema(const Eigen::MatrixXd& f, const PhaseLattice& lattice) {
    const long n = lattice.n();
    if (f.rows() != ix(n) || f.cols() != ix(n)) throw Error(ErrorKind::structural, "local_suprema: grid size mismatch");
    std::vector<double> a(lattice.size(), 0.0);
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        const PhasePoint p = lattice.point(i);
        double m = 0.0;
        for (long dx = 0; dx < lattice.alpha(); ++dx) {
            for (long dxi = 0; dxi < lattice.beta(); ++dxi) m = std::max(m, f(ix(mod(p.x + dx, n)), ix(mod(p.xi + dxi, n))));
        }
        a[i] = m;
    }
    return LatticeSeq::from_real(lattice, a);
}

double amalgam_norm(const Eigen::MatrixXd& f, const PhaseLattice& lattice, const AlgebraSpec& spec) {
    if (!(spec.lattice == lattice)) throw Error(ErrorKind::structural, "amalgam_norm: lattice mismatch");
    return algebra_norm(local_suprema(f, lattice), spec);
}

Eigen::MatrixXd rotate_grand(const GrandSymbol& g) {
    const long n = g.n();
    Eigen::MatrixXd f(ix(n), ix(n));
    for (long a = 0; a < n; ++a) {
        for (long b = 0; b < n; ++b) f(ix(a), ix(b)) = g(rotate_j({a, b}, n));
    }
    return f;
}

ClassNormReport sjostrand_norm(const Symbol& sigma, const Signal& g, const AlgebraSpec& spec, double threshold) {
    if (g.norm() == 0.0) throw Error(ErrorKind::degenerate, "sjostrand_norm: degenerate window");
    const GrandSymbol grand = grand_symbol(sigma, weyl_window(g), "weyl_window");
    ClassNormReport rep{0.0, spec.q, spec, false};
    rep.sjostrand_norm = amalgam_norm(rotate_grand(grand), spec.lattice, spec);
    rep.member = rep.sjostrand_norm <= threshold;
    return rep;
}

double modspace_norm(const Symbol& sigma, Exponent q, const WeightSpec& weight) {
    const long n = sigma.n();
    const GrandSymbol grand = grand_symbol(sigma, periodized_gaussian_2d(n), "periodized_gaussian_2d");
    double acc = 0.0;
    for (long a = 0; a < n; ++a) {
        for (long b = 0; b < n; ++b) {
            const double term = grand.values(ix(a), ix(b)) * weight({a, b}, n);
            acc = q == Exponent::one ? acc + term : std::max(acc, term);
        }
    }
    return acc;
}

WindowRatio window_independence_check(const Symbol& sigma, const Signal& g1, const Signal& g2, const AlgebraSpec& spec) {
    WindowRatio r;
    r.norm1 = sjostrand_norm(sigma, g1, spec).sjostrand_norm;
    r.norm2 = sjostrand_norm(sigma, g2, spec).sjostrand_norm;
    if (r.norm2 == 0.0) {
        r.ratio = r.norm1 == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
        r.ratio = r.norm1 / r.norm2;
    }
    return r;
}

HormanderReport hormander_profile(const Symbol& sigma, const Signal& g, const std::vector<double>& s_list,
                                  double tail_radius) {
    const long n = g.n();
    const PhaseLattice full(n, 1, 1);
    const Eigen::MatrixXcd e = full_matrix_elements(sigma, g);
    const CDMatrix m(full, e);

    HormanderReport rep{m.envelope(), {}, false, {}, 0.0, tail_radius};
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (full.length(i) > tail_radius) rep.tail_max = std::max(rep.tail_max, rep.envelope[i].real());
    }
    try {
        rep.fit = decay_fit(rep.envelope);
        rep.fit_ok = true;
    } catch (const Error&) {
        rep.fit_ok = false;
    }
    for (double s : s_list) {
        double c = 0.0;
        for (std::size_t i = 0; i < full.size(); ++i) {
            const double r = full.length(i);
            c = std::max(c, rep.envelope[i].real() * std::pow(1.0 + r * r, s / 2.0));
        }
        rep.rows.push_back({s, c});
    }
    return rep;
}

}  // namespace tfpsi
