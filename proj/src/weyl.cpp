#include "tfpsi/weyl.hpp"

#include "tfpsi/parallel.hpp"

namespace tfpsi {

namespace {

Eigen::Index ix(long i) { return static_cast<Eigen::Index>(i); }

}  // namespace

OperatorMatrix::OperatorMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw Error(ErrorKind::structural, "OperatorMatrix: must be square");
    require_odd(static_cast<long>(entries_.rows()), "OperatorMatrix");
}

OperatorMatrix OperatorMatrix::identity(long n) {
    require_odd(n, "OperatorMatrix");
    return OperatorMatrix(Eigen::MatrixXcd::Identity(ix(n), ix(n)));
}

OperatorMatrix OperatorMatrix::outer(const Signal& u, const Signal& g) {
    return OperatorMatrix(u.values() * g.values().adjoint());
}

OperatorMatrix quantize(const Symbol& sigma) {
    const long n = sigma.n();
    const long h = half_mod(n);
    const RootTable w(n);
    // k(u, d) = (1/N) Σ_ξ σ(u, ξ) e^{2πi dξ/N}; then T(x, y) = k(h(x+y), x−y).
    Eigen::MatrixXcd k(ix(n), ix(n));
    for (long u = 0; u < n; ++u) {
        for (long d = 0; d < n; ++d) {
            cd acc{};
            for (long xi = 0; xi < n; ++xi) acc += sigma(u, xi) * w(d * xi);
            k(ix(u), ix(d)) = acc / static_cast<double>(n);
        }
    }
    Eigen::MatrixXcd t(ix(n), ix(n));
    for (long x = 0; x < n; ++x) {
        for (long y = 0; y < n; ++y) t(ix(x), ix(y)) = k(ix(mod(h * (x + y), n)), ix(mod(x - y, n)));
    }
    return OperatorMatrix(std::move(t));
}

Symbol dequantize(const OperatorMatrix& op) {
    const long n = op.n();
    const long h = half_mod(n);
    const RootTable w(n);
    const auto& t = op.entries();
    Symbol s(n);
    for (long u = 0; u < n; ++u) {
        for (long xi = 0; xi < n; ++xi) {
            cd acc{};
            for (long r = 0; r < n; ++r) acc += t(ix(mod(u + h * r, n)), ix(mod(u - h * r, n))) * w(-r * xi);
            s(u, xi) = acc;
        }
    }
    return s;
}

Symbol twisted_product(const Symbol& sigma, const Symbol& tau) {
    if (sigma.n() != tau.n()) throw Error(ErrorKind::structural, "twisted_product: size mismatch");
    return dequantize(quantize(sigma) * quantize(tau));
}

Symbol weyl_window(const Signal& g) {
    Symbol phi = wigner(g, g);
    phi *= 1.0 / static_cast<double>(g.n());
    return phi;
}

Eigen::MatrixXcd full_matrix_elements(const Symbol& sigma, const Signal& g) {
    if (sigma.n() != g.n()) throw Error(ErrorKind::structural, "full_matrix_elements: size mismatch");
    const PhaseLattice full(g.n(), 1, 1);
    const Eigen::MatrixXcd atoms = atom_matrix(g, full);
    const Eigen::MatrixXcd image = quantize(sigma).entries() * atoms;
    return atoms.adjoint() * image;
}

CovarianceReport covariance_check(const Symbol& sigma, const Signal& g) {
    if (g.norm() == 0.0) throw Error(ErrorKind::degenerate, "covariance_check: degenerate window");
    const long n = g.n();
    const long h = half_mod(n);
    const Eigen::MatrixXcd e = full_matrix_elements(sigma, g);
    const auto nn = static_cast<std::size_t>(n * n);

    // Slot u collects everything that lives at stft2 position u.
    std::vector<double> fwd_diff(nn, 0.0), back_diff(nn, 0.0), peak(nn, 0.0), peak_e(nn, 0.0);
    stft2_visit(sigma, weyl_window(g), [&](PhasePoint u, const Eigen::MatrixXcd& block) {
        const std::size_t slot = flat_index(u, n);
        for (long a = 0; a < n; ++a) {
            for (long b = 0; b < n; ++b) {
                const PhasePoint v{a, b};
                const double rhs = std::abs(block(ix(a), ix(b)));
                // forward: the pair (w, z) with h(w+z) = u and j(w−z) = v
                const PhasePoint d = rotate_j_inv(v, n);  // w − z
                const PhasePoint hd = scale(h, d, n);
                const PhasePoint w = add(u, hd, n);
                const PhasePoint z = sub(u, hd, n);
                const double lhs = std::abs(e(static_cast<Eigen::Index>(flat_index(w, n)), static_cast<Eigen::Index>(flat_index(z, n))));
                fwd_diff[slot] = std::max(fwd_diff[slot], std::abs(lhs - rhs));
                peak[slot] = std::max(peak[slot], rhs);
                peak_e[slot] = std::max(peak_e[slot], lhs);
            }
        }
    });

    // Read-back direction: start from every matrix element and look up the stft2 value it predicts.
    const SymbolStft v = stft2(sigma, weyl_window(g));
    parallel_for(nn, [&](std::size_t wi) {
        const PhasePoint w = from_flat(wi, n);
        double worst = 0.0;
        for (std::size_t zi = 0; zi < nn; ++zi) {
            const PhasePoint z = from_flat(zi, n);
            const PhasePoint u = scale(h, add(w, z, n), n);
            const PhasePoint zeta = rotate_j(sub(w, z, n), n);
            const double lhs = std::abs(e(static_cast<Eigen::Index>(wi), static_cast<Eigen::Index>(zi)));
            worst = std::max(worst, std::abs(lhs - std::abs(v(u, zeta))));
        }
        back_diff[wi] = worst;
    });

    CovarianceReport rep;
    rep.pairs = nn * nn;
    double fd = 0.0, bd = 0.0, sc = 0.0, sce = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
        fd = std::max(fd, fwd_diff[i]);
        bd = std::max(bd, back_diff[i]);
        sc = std::max(sc, peak[i]);
        sce = std::max(sce, peak_e[i]);
    }
    rep.max_rel_err = sc > 0.0 ? fd / sc : fd;
    rep.readback_rel_err = sce > 0.0 ? bd / sce : bd;
    return rep;
}

}  // namespace tfpsi
