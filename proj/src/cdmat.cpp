#include "tfpsi/cdmat.hpp"

#include <cmath>

#include "tfpsi/parallel.hpp"
#include "tfpsi/rng.hpp"

namespace tfpsi {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_same(const PhaseLattice& a, const PhaseLattice& b, const char* op) {
    if (!(a == b)) throw Error(ErrorKind::structural, std::string(op) + ": lattice mismatch");
}

}  // namespace

LatticeSeq envelope(const Eigen::MatrixXcd& entries, const PhaseLattice& lattice) {
    const std::size_t size = lattice.size();
    if (entries.rows() != ix(size) || entries.cols() != ix(size)) {
        throw Error(ErrorKind::structural, "envelope: matrix shape does not match lattice");
    }
    std::vector<double> d(size, 0.0);
    for (std::size_t lam = 0; lam < size; ++lam) {
        for (std::size_t mu = 0; mu < size; ++mu) {
            const std::size_t diff = lattice.sub(lam, mu);
            d[diff] = std::max(d[diff], std::abs(entries(ix(lam), ix(mu))));
        }
    }
    return LatticeSeq::from_real(lattice, d);
}

CDMatrix::CDMatrix(PhaseLattice lattice, Eigen::MatrixXcd entries)
    : lattice_(lattice), entries_(std::move(entries)), envelope_(tfpsi::envelope(entries_, lattice_)) {}

CDMatrix CDMatrix::identity(PhaseLattice lattice) {
    const auto n = ix(lattice.size());
    return CDMatrix(lattice, Eigen::MatrixXcd::Identity(n, n));
}

CDMatrix CDMatrix::circulant(const LatticeSeq& a) {
    const auto& lat = a.lattice();
    Eigen::MatrixXcd m(ix(lat.size()), ix(lat.size()));
    for (std::size_t lam = 0; lam < lat.size(); ++lam) {
        for (std::size_t mu = 0; mu < lat.size(); ++mu) m(ix(lam), ix(mu)) = a[lat.sub(lam, mu)];
    }
    return CDMatrix(lat, std::move(m));
}

CDMatrix operator*(const CDMatrix& a, const CDMatrix& b) {
    require_same(a.lattice(), b.lattice(), "CDMatrix product");
    return CDMatrix(a.lattice(), a.entries() * b.entries());
}

double cda_norm(const CDMatrix& a, const AlgebraSpec& spec) {
    require_same(a.lattice(), spec.lattice, "cda_norm");
    return algebra_norm(a.envelope(), spec);
}

ProductBoundReport envelope_product_bound(const CDMatrix& a, const CDMatrix& b) {
    require_same(a.lattice(), b.lattice(), "envelope_product_bound");
    const CDMatrix ab = a * b;
    const LatticeSeq conv = convolve(a.envelope(), b.envelope());
    ProductBoundReport rep;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < conv.size(); ++i) {
        rep.max_violation = std::max(rep.max_violation, ab.envelope()[i].real() - conv[i].real());
        rep.scale = std::max(rep.scale, conv[i].real());
    }
    return rep;
}

std::pair<LatticeSeq, ApplyReport> apply(const CDMatrix& a, const LatticeSeq& c, const AlgebraSpec& spec) {
    require_same(a.lattice(), c.lattice(), "apply");
    require_same(a.lattice(), spec.lattice, "apply");
    const Eigen::VectorXcd in = Eigen::Map<const Eigen::VectorXcd>(c.values().data(), ix(c.size()));
    const Eigen::VectorXcd out = a.entries() * in;
    LatticeSeq result(a.lattice(), std::vector<cd>(out.data(), out.data() + out.size()));

    ApplyReport rep;
    rep.algebra_constant = check_algebra_weight(spec).worst_ratio;
    rep.lhs = algebra_norm(result, spec);
    rep.rhs = rep.algebra_constant * cda_norm(a, spec) * algebra_norm(c, spec);
    rep.ok = rep.lhs <= rep.rhs * (1.0 + 1e-12) + 1e-300;
    return {std::move(result), rep};
}

Eigen::MatrixXcd pinv(const Eigen::MatrixXcd& a, double rtol) {
    if (!(rtol > 0.0 && rtol <= 1e-2)) throw Error(ErrorKind::config, "pinv: rtol must lie in (0, 1e-2]");
    if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) return Eigen::MatrixXcd::Zero(a.cols(), a.rows());
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = rtol * sv(0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

CDMatrix pinv(const CDMatrix& a, double rtol) { return CDMatrix(a.lattice(), pinv(a.entries(), rtol)); }

DecayFit decay_fit(const LatticeSeq& d, double min_dist) {
    if (min_dist < 1.0) throw Error(ErrorKind::config, "decay_fit: minDist must be at least 1");
    const auto& lat = d.lattice();
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double r = lat.length(i);
        const double v = std::abs(d[i]);
        if (r < min_dist || !(v > 1e-300)) continue;
        xs.push_back(std::log(std::sqrt(1.0 + r * r)));
        ys.push_back(std::log(v));
    }
    if (xs.size() < 4) throw Error(ErrorKind::degenerate, "decay_fit: insufficient support");

    const double m = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorKind::degenerate, "decay_fit: insufficient support (single radius)");
    const double slope = sxy / sxx;
    const double icpt = my - slope * mx;

    DecayFit fit;
    fit.s_hat = -slope;
    fit.c_hat = std::exp(icpt);
    fit.points_used = xs.size();
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (icpt + slope * xs[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

FourierReport diagonal_fourier_check(const CDMatrix& a, long t_samples) {
    const auto& lat = a.lattice();
    const long rows = lat.rows();
    const long cols = lat.cols();
    if (t_samples < 1 || t_samples % rows != 0 || t_samples % cols != 0) {
        throw Error(ErrorKind::config, "diagonal_fourier_check: tSamples must be a multiple of the lattice periods");
    }
    const long T = t_samples;
    const RootTable w(T);
    const std::size_t size = lat.size();

    // Per entry (λ, μ): sample f(t)_{λμ} on the T×T torus grid and take its 2-D DFT.
    // The coefficient at n must be A_{λμ} when n ≡ k_λ − k_μ (mod T) and 0 otherwise.
    std::vector<double> row_err(size, 0.0);
    parallel_for(size, [&](std::size_t lam) {
        const auto [k1, k2] = lat.indices(lam);
        std::vector<cd> samples(static_cast<std::size_t>(T * T));
        std::vector<cd> partial(static_cast<std::size_t>(T * T));
        double err = 0.0;
        for (std::size_t mu = 0; mu < size; ++mu) {
            const auto [l1, l2] = lat.indices(mu);
            const cd entry = a(lam, mu);
            for (long t1 = 0; t1 < T; ++t1) {
                for (long t2 = 0; t2 < T; ++t2) {
                    // (M_t A M_{−t})_{λμ} = e^{2πi k_λ·t} A_{λμ} e^{−2πi k_μ·t}
                    samples[static_cast<std::size_t>(t1 * T + t2)] =
                        w(k1 * t1 + k2 * t2) * entry * w(-(l1 * t1 + l2 * t2));
                }
            }
            for (long t1 = 0; t1 < T; ++t1) {
                for (long n2 = 0; n2 < T; ++n2) {
                    cd acc{};
                    for (long t2 = 0; t2 < T; ++t2) acc += samples[static_cast<std::size_t>(t1 * T + t2)] * w(-n2 * t2);
                    partial[static_cast<std::size_t>(t1 * T + n2)] = acc;
                }
            }
            const long d1 = mod(k1 - l1, T);
            const long d2 = mod(k2 - l2, T);
            for (long n1 = 0; n1 < T; ++n1) {
                for (long n2 = 0; n2 < T; ++n2) {
                    cd acc{};
                    for (long t1 = 0; t1 < T; ++t1) acc += partial[static_cast<std::size_t>(t1 * T + n2)] * w(-n1 * t1);
                    acc /= static_cast<double>(T * T);
                    const cd expected = (n1 == d1 && n2 == d2) ? entry : cd{};
                    err = std::max(err, std::abs(acc - expected));
                }
            }
        }
        row_err[lam] = err;
    });
    FourierReport rep;
    rep.samples = T * T;
    for (double e : row_err) rep.max_err = std::max(rep.max_err, e);
    return rep;
}

CDMatrix synthetic_jaffard(const PhaseLattice& lattice, double s, std::uint64_t seed, double strength) {
    const std::size_t size = lattice.size();
    Rng rng(seed, 0x4a41u);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(ix(size), ix(size));
    for (std::size_t lam = 0; lam < size; ++lam) {
        for (std::size_t mu = 0; mu < size; ++mu) {
            const double r = lattice.length(lattice.sub(lam, mu));
            const double mag = strength * std::pow(1.0 + r * r, -s / 2.0) * rng.uniform(0.5, 1.0);
            m(ix(lam), ix(mu)) += mag * rng.unimodular();
        }
    }
    return CDMatrix(lattice, std::move(m));
}

}  // namespace tfpsi
