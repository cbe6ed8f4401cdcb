#include "tfpsi/phase.hpp"

#include <Eigen/Eigenvalues>

#include "tfpsi/parallel.hpp"

namespace tfpsi {

namespace {

Eigen::Index ix(long i) { return static_cast<Eigen::Index>(i); }

void require_same_n(long a, long b, const char* op) {
    if (a != b) throw Error(ErrorKind::structural, std::string(op) + ": length mismatch");
}

void require_nonzero(const Eigen::MatrixXcd& v, const char* op) {
    if (v.cwiseAbs().maxCoeff() == 0.0) throw Error(ErrorKind::degenerate, std::string(op) + ": degenerate window");
}

/// F(a, b) = e^{−2πi ab/N}
Eigen::MatrixXcd dft_matrix(long n) {
    const RootTable w(n);
    Eigen::MatrixXcd f(ix(n), ix(n));
    for (long a = 0; a < n; ++a) {
        for (long b = 0; b < n; ++b) f(ix(a), ix(b)) = w(-a * b);
    }
    return f;
}

}  // namespace

Signal::Signal(long n) {
    require_odd(n, "Signal");
    values_ = Eigen::VectorXcd::Zero(ix(n));
}

Signal::Signal(Eigen::VectorXcd values) : values_(std::move(values)) {
    require_odd(static_cast<long>(values_.size()), "Signal");
}

Signal Signal::delta(long n, long at) {
    Signal d(n);
    d[at] = 1.0;
    return d;
}

cd inner(const Signal& f, const Signal& g) {
    require_same_n(f.n(), g.n(), "inner");
    return g.values().dot(f.values());  // Eigen's dot conjugates the left operand
}

Symbol::Symbol(long n) {
    require_odd(n, "Symbol");
    values_ = Eigen::MatrixXcd::Zero(ix(n), ix(n));
}

Symbol::Symbol(Eigen::MatrixXcd values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols()) throw Error(ErrorKind::structural, "Symbol: array must be square");
    require_odd(static_cast<long>(values_.rows()), "Symbol");
}

Symbol Symbol::constant(long n, cd c) {
    Symbol s(n);
    s.values().setConstant(c);
    return s;
}

Signal tf_shift(PhasePoint z, const Signal& f) {
    const long n = f.n();
    const RootTable w(n);
    Signal out(n);
    for (long t = 0; t < n; ++t) out[t] = w(z.xi * t) * f[t - z.x];
    return out;
}

Eigen::MatrixXcd stft(const Signal& f, const Signal& g) {
    require_same_n(f.n(), g.n(), "stft");
    require_nonzero(g.values(), "stft");
    const long n = f.n();
    const Eigen::MatrixXcd F = dft_matrix(n);
    // Row x of P is f(t) conj(g(t − x)); V_g f = P F.
    Eigen::MatrixXcd p(ix(n), ix(n));
    for (long x = 0; x < n; ++x) {
        for (long t = 0; t < n; ++t) p(ix(x), ix(t)) = f[t] * std::conj(g[t - x]);
    }
    return p * F;
}

void stft2_visit(const Symbol& sigma, const Symbol& phi,
                 const std::function<void(PhasePoint, const Eigen::MatrixXcd&)>& visit) {
    require_same_n(sigma.n(), phi.n(), "stft2");
    require_nonzero(phi.values(), "stft2");
    const long n = sigma.n();
    const Eigen::MatrixXcd F = dft_matrix(n);
    parallel_for(static_cast<std::size_t>(n * n), [&](std::size_t zi) {
        const PhasePoint z = from_flat(zi, n);
        Eigen::MatrixXcd p(ix(n), ix(n));
        for (long u1 = 0; u1 < n; ++u1) {
            for (long u2 = 0; u2 < n; ++u2) p(ix(u1), ix(u2)) = sigma(u1, u2) * std::conj(phi(u1 - z.x, u2 - z.xi));
        }
        // Σ_u p(u) e^{−2πi(ζ1 u1 + ζ2 u2)/N} = (F p F)(ζ1, ζ2) since F is symmetric.
        const Eigen::MatrixXcd block = F * p * F;
        visit(z, block);
    });
}

SymbolStft stft2(const Symbol& sigma, const Symbol& phi) {
    const long n = sigma.n();
    const auto nn = static_cast<std::size_t>(n * n);
    std::vector<cd> data(nn * nn);
    stft2_visit(sigma, phi, [&](PhasePoint z, const Eigen::MatrixXcd& block) {
        const std::size_t base = flat_index(z, n) * nn;
        for (long a = 0; a < n; ++a) {
            for (long b = 0; b < n; ++b) data[base + static_cast<std::size_t>(a * n + b)] = block(ix(a), ix(b));
        }
    });
    return SymbolStft(n, std::move(data));
}

Symbol wigner(const Signal& f, const Signal& g) {
    require_same_n(f.n(), g.n(), "wigner");
    const long n = f.n();
    const long h = half_mod(n);
    const Eigen::MatrixXcd F = dft_matrix(n);
    Eigen::MatrixXcd p(ix(n), ix(n));
    for (long x = 0; x < n; ++x) {
        for (long t = 0; t < n; ++t) p(ix(x), ix(t)) = f[x + h * t] * std::conj(g[x - h * t]);
    }
    return Symbol(p * F);
}

Eigen::MatrixXcd atom_matrix(const Signal& g, const PhaseLattice& lattice) {
    require_same_n(g.n(), lattice.n(), "atom_matrix");
    const long n = g.n();
    Eigen::MatrixXcd a(ix(n), static_cast<Eigen::Index>(lattice.size()));
    for (std::size_t i = 0; i < lattice.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = tf_shift(lattice.point(i), g).values();
    return a;
}

Eigen::MatrixXcd frame_operator(const Signal& g, const PhaseLattice& lattice) {
    const Eigen::MatrixXcd a = atom_matrix(g, lattice);
    Eigen::MatrixXcd s = a * a.adjoint();
    return (s + s.adjoint()) * 0.5;
}

GaborSystem::GaborSystem(Signal window, PhaseLattice lattice)
    : window_(std::move(window)), lattice_(lattice), atoms_(atom_matrix(window_, lattice_)) {
    frame_ = atoms_ * atoms_.adjoint();
    frame_ = (frame_ + frame_.adjoint()) * 0.5;
    const auto n = ix(window_.n());
    tight_err_ = (frame_ - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    tight_ = tight_err_ <= 1e-10;
}

GaborSystem tighten(const Signal& g, const PhaseLattice& lattice) {
    const Eigen::MatrixXcd s = frame_operator(g, lattice);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(s);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double top = ev.maxCoeff();
    if (!(top > 0.0) || !(ev.minCoeff() > 1e-12 * top)) {
        throw Error(ErrorKind::degenerate, "window does not generate a frame on this lattice");
    }
    const Eigen::VectorXd inv_sqrt = ev.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXcd root = eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().adjoint();
    GaborSystem sys(Signal(Eigen::VectorXcd(root * g.values())), lattice);
    if (!sys.tight()) {
        throw Error(ErrorKind::numerical, "tighten: frame operator differs from identity by " +
                                              std::to_string(sys.tightness_error()));
    }
    return sys;
}

LatticeSeq analysis(const GaborSystem& sys, const Signal& f) {
    require_same_n(sys.n(), f.n(), "analysis");
    const Eigen::VectorXcd c = sys.atoms().adjoint() * f.values();
    return LatticeSeq(sys.lattice(), std::vector<cd>(c.data(), c.data() + c.size()));
}

Signal synthesis(const GaborSystem& sys, const LatticeSeq& c) {
    if (!(c.lattice() == sys.lattice())) throw Error(ErrorKind::structural, "synthesis: lattice mismatch");
    const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(c.values().data(), static_cast<Eigen::Index>(c.size()));
    return Signal(Eigen::VectorXcd(sys.atoms() * v));
}

Signal periodized_gaussian(long n) {
    Signal g(n);
    const double rn = std::sqrt(static_cast<double>(n));
    for (long t = 0; t < n; ++t) {
        double acc = 0.0;
        for (long m = -5; m <= 5; ++m) {
            const double u = static_cast<double>(t + m * n) / rn;
            acc += std::exp(-std::numbers::pi * u * u);
        }
        g[t] = acc;
    }
    return g;
}

Symbol periodized_gaussian_2d(long n) {
    require_odd(n, "periodized_gaussian_2d");
    std::vector<double> p(static_cast<std::size_t>(n));
    for (long t = 0; t < n; ++t) {
        double acc = 0.0;
        for (long m = -5; m <= 5; ++m) {
            const double u = static_cast<double>(t + m * n);
            acc += std::exp(-std::numbers::pi * u * u / (2.0 * static_cast<double>(n)));
        }
        p[static_cast<std::size_t>(t)] = acc;
    }
    Symbol s(n);
    for (long x = 0; x < n; ++x) {
        for (long xi = 0; xi < n; ++xi) s(x, xi) = p[static_cast<std::size_t>(x)] * p[static_cast<std::size_t>(xi)];
    }
    return s;
}

MagicReport magic_formula_check(const Signal& g, const Signal& phi) {
    require_same_n(g.n(), phi.n(), "magic_formula_check");
    const long n = g.n();
    const long h = half_mod(n);
    const Symbol wg = wigner(g, g);
    const Symbol wphi = wigner(phi, phi);
    const Eigen::MatrixXcd v = stft(g, phi);
    const double dn = static_cast<double>(n);

    const auto nn = static_cast<std::size_t>(n * n);
    std::vector<double> diff(nn, 0.0);
    std::vector<double> peak(nn, 0.0);
    stft2_visit(wg, wphi, [&](PhasePoint z, const Eigen::MatrixXcd& block) {
        double d = 0.0, s = 0.0;
        for (long a = 0; a < n; ++a) {
            for (long b = 0; b < n; ++b) {
                const PhasePoint hj = tfpsi::scale(h, rotate_j({a, b}, n), n);
                const PhasePoint p = add(z, hj, n);
                const PhasePoint m = sub(z, hj, n);
                const double rhs = dn * std::abs(v(ix(p.x), ix(p.xi))) * std::abs(v(ix(m.x), ix(m.xi)));
                d = std::max(d, std::abs(std::abs(block(ix(a), ix(b))) - rhs));
                s = std::max(s, rhs);
            }
        }
        diff[flat_index(z, n)] = d;
        peak[flat_index(z, n)] = s;
    });
    MagicReport rep;
    double d = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
        d = std::max(d, diff[i]);
        rep.scale = std::max(rep.scale, peak[i]);
    }
    rep.max_rel_err = rep.scale > 0.0 ? d / rep.scale : d;
    return rep;
}

MagicReport magic_formula_check(const Signal& g) { return magic_formula_check(g, periodized_gaussian(g.n())); }

}  // namespace tfpsi
