#include "tfpsi/aldiag.hpp"

#include <cstring>
#include <iomanip>
#include <sstream>

#include "tfpsi/parallel.hpp"
#include "tfpsi/rng.hpp"

namespace tfpsi {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_tight(const GaborSystem& sys, const char* op) {
    if (!sys.tight()) throw Error(ErrorKind::structural, std::string(op) + ": Gabor system is not tight");
}

void require_spec(const GaborSystem& sys, const AlgebraSpec& spec, const char* op) {
    if (!(sys.lattice() == spec.lattice)) throw Error(ErrorKind::structural, std::string(op) + ": algebra lattice differs from the Gabor lattice");
}

bool in_box_difference(PhasePoint d, const PhaseLattice& lat) {
    return periodic_abs(d.x, lat.n()) <= lat.alpha() - 1 && periodic_abs(d.xi, lat.n()) <= lat.beta() - 1;
}

Eigen::VectorXcd random_coefficients(std::size_t size, Rng& rng) {
    Eigen::VectorXcd c(ix(size));
    for (std::size_t i = 0; i < size; ++i) c(ix(i)) = rng.complex_normal();
    return c;
}

}  // namespace

Signal random_signal(long n, std::uint64_t seed, std::uint64_t stream) {
    Rng rng(seed, stream);
    Signal f(n);
    for (long t = 0; t < n; ++t) f[t] = rng.complex_normal();
    return f;
}

std::string system_id(const GaborSystem& sys) {
    // FNV-1a over the window's bytes, so equal windows give equal ids across runs.
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (long t = 0; t < sys.n(); ++t) {
        const cd v = sys.window()[t];
        const double parts[2] = {v.real(), v.imag()};
        unsigned char bytes[sizeof parts];
        std::memcpy(bytes, parts, sizeof parts);
        for (unsigned char b : bytes) {
            hash ^= b;
            hash *= 0x100000001b3ULL;
        }
    }
    std::ostringstream os;
    os << "gabor-n" << sys.n() << "-a" << sys.lattice().alpha() << "-b" << sys.lattice().beta() << "-" << std::hex
       << std::setw(16) << std::setfill('0') << hash;
    return os.str();
}

GaborMatrix gabor_matrix(const Symbol& sigma, const GaborSystem& sys, std::string symbol_id, std::uint64_t probe_seed) {
    require_tight(sys, "gabor_matrix");
    if (sigma.n() != sys.n()) throw Error(ErrorKind::structural, "gabor_matrix: size mismatch");
    const Eigen::MatrixXcd q = quantize(sigma).entries();
    const Eigen::MatrixXcd& a = sys.atoms();
    Eigen::MatrixXcd m = a.adjoint() * (q * a);

    double residual = 0.0;
    for (int k = 0; k < 5; ++k) {
        const Signal f = random_signal(sys.n(), probe_seed, 0xd1a0u + static_cast<std::uint64_t>(k));
        const Eigen::VectorXcd lhs = a.adjoint() * (q * f.values());
        const Eigen::VectorXcd rhs = m * (a.adjoint() * f.values());
        const double scale = std::max(lhs.norm(), 1e-300);
        residual = std::max(residual, (lhs - rhs).norm() / scale);
    }
    return GaborMatrix{CDMatrix(sys.lattice(), std::move(m)), system_id(sys), std::move(symbol_id), residual};
}

LatticeSeq alpha_sequence(const GaborSystem& sys) {
    const auto& lat = sys.lattice();
    const Eigen::MatrixXd v = stft(sys.window(), sys.window()).cwiseAbs();
    return local_suprema(v, lat);
}

LatticeSeq beta_sequence(const PhaseLattice& lat) {
    std::vector<double> b(lat.size(), 0.0);
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const PhasePoint nu = lat.point(i);
        for (long dx = 0; dx < lat.alpha() && b[i] == 0.0; ++dx) {
            for (long dxi = 0; dxi < lat.beta(); ++dxi) {
                if (in_box_difference({nu.x + dx, nu.xi + dxi}, lat)) {
                    b[i] = 1.0;
                    break;
                }
            }
        }
    }
    return LatticeSeq::from_real(lat, b);
}

Eigen::MatrixXd dominating_H(const LatticeSeq& h, const GaborSystem& sys) {
    const auto& lat = sys.lattice();
    if (!(h.lattice() == lat)) throw Error(ErrorKind::structural, "dominating_H: lattice mismatch");
    const LatticeSeq alpha = alpha_sequence(sys);
    const LatticeSeq x = convolve(convolve(h.abs(), alpha), involute(alpha));
    const long n = lat.n();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (long a = 0; a < n; ++a) {
        for (long b = 0; b < n; ++b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < lat.size(); ++i) {
                const PhasePoint nu = lat.point(i);
                if (in_box_difference({a - nu.x, b - nu.xi}, lat)) acc += std::abs(x[i]);
            }
            out(a, b) = acc;
        }
    }
    return out;
}

DominationBound domination_bound(const LatticeSeq& h, const GaborSystem& sys, const AlgebraSpec& spec) {
    require_spec(sys, spec, "domination_bound");
    const auto& lat = sys.lattice();
    const LatticeSeq alpha = alpha_sequence(sys);
    const LatticeSeq beta = beta_sequence(lat);
    const LatticeSeq aab = convolve(convolve(alpha, involute(alpha)), beta);

    DominationBound r;
    r.h_amalgam = amalgam_norm(dominating_H(h, sys), lat, spec);
    r.middle = algebra_norm(convolve(h.abs(), aab), spec);
    r.constant = algebra_norm(aab, spec);
    r.algebra_constant = check_algebra_weight(spec).worst_ratio;
    r.h_norm = algebra_norm(h, spec);
    r.rhs = r.algebra_constant * r.constant * r.h_norm;
    r.ok = r.h_amalgam <= r.middle * (1.0 + 1e-10) + 1e-300 && r.middle <= r.rhs * (1.0 + 1e-10) + 1e-300;
    return r;
}

ChainReport aldiag_chain(const Symbol& sigma, const GaborSystem& sys, const AlgebraSpec& spec) {
    require_tight(sys, "aldiag_chain");
    require_spec(sys, spec, "aldiag_chain");
    const long n = sys.n();
    const auto& lat = sys.lattice();
    const Eigen::MatrixXcd e = full_matrix_elements(sigma, sys.window());
    const Eigen::MatrixXd f = rotate_grand(grand_symbol(sigma, weyl_window(sys.window())));
    const GaborMatrix m = gabor_matrix(sigma, sys);
    const LatticeSeq& h = envelope_h(m);
    const Eigen::MatrixXd big_h = dominating_H(h, sys);

    ChainReport rep;
    const auto nn = static_cast<std::size_t>(n * n);
    std::vector<double> va(nn, -std::numeric_limits<double>::infinity());
    std::vector<double> vc(nn, -std::numeric_limits<double>::infinity());
    parallel_for(nn, [&](std::size_t wi) {
        const PhasePoint w = from_flat(wi, n);
        for (std::size_t zi = 0; zi < nn; ++zi) {
            const PhasePoint d = sub(w, from_flat(zi, n), n);
            const double val = std::abs(e(ix(wi), ix(zi)));
            va[wi] = std::max(va[wi], val - f(d.x, d.xi));
            vc[wi] = std::max(vc[wi], val - big_h(d.x, d.xi));
        }
    });
    const double fmax = std::max(f.maxCoeff(), 1e-300);
    const double hmax = std::max(big_h.maxCoeff(), 1e-300);
    rep.pointwise_violation = *std::max_element(va.begin(), va.end()) / fmax;
    rep.domination_violation = *std::max_element(vc.begin(), vc.end()) / hmax;

    const LatticeSeq sup_f = local_suprema(f, lat);
    double vb = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lat.size(); ++i) vb = std::max(vb, h[i].real() - sup_f[i].real());
    rep.envelope_violation = vb / fmax;
    rep.bound = domination_bound(h, sys, spec);
    return rep;
}

NormEquivalence norm_equivalence_check(const Symbol& sigma, const GaborSystem& sys, const AlgebraSpec& spec) {
    require_tight(sys, "norm_equivalence_check");
    require_spec(sys, spec, "norm_equivalence_check");
    NormEquivalence r;
    r.matrix_norm = cda_norm(gabor_matrix(sigma, sys).matrix, spec);
    r.symbol_norm = sjostrand_norm(sigma, sys.window(), spec).sjostrand_norm;
    r.c_lower = r.symbol_norm > 0.0 ? r.matrix_norm / r.symbol_norm : 0.0;
    r.upper_ok = r.matrix_norm <= r.symbol_norm * (1.0 + 1e-10) + 1e-300;
    return r;
}

StructureReport matrix_structure_check(const GaborMatrix& m, const GaborSystem& sys, std::uint64_t seed, int samples) {
    const Eigen::MatrixXcd p = sys.range_projection();
    const auto size = sys.lattice().size();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(ix(size), ix(size));
    const Eigen::MatrixXcd& a = m.matrix.entries();
    Rng rng(seed, 0x5717u);
    StructureReport r;
    for (int k = 0; k < samples; ++k) {
        const Eigen::VectorXcd c = random_coefficients(size, rng);
        const double cn = c.norm();
        r.kernel_leak = std::max(r.kernel_leak, (a * ((id - p) * c)).norm() / cn);
        r.range_leak = std::max(r.range_leak, ((id - p) * (a * (p * c))).norm() / cn);
    }
    return r;
}

AlgebraIdentityReport algebra_identity_check(const Symbol& sigma, const Symbol& tau, const GaborSystem& sys,
                                             const AlgebraSpec& spec, std::uint64_t seed, int samples) {
    require_tight(sys, "algebra_identity_check");
    require_spec(sys, spec, "algebra_identity_check");
    const Symbol st = twisted_product(sigma, tau);
    const GaborMatrix ms = gabor_matrix(sigma, sys);
    const GaborMatrix mt = gabor_matrix(tau, sys);
    const GaborMatrix mst = gabor_matrix(st, sys);
    const Eigen::MatrixXcd prod = ms.matrix.entries() * mt.matrix.entries();
    const Eigen::MatrixXcd p = sys.range_projection();
    const auto size = sys.lattice().size();

    AlgebraIdentityReport r;
    Rng rng(seed, 0xa1e6u);
    for (int k = 0; k < samples; ++k) {
        const Signal f = random_signal(sys.n(), seed, 0xa1e7u + static_cast<std::uint64_t>(k));
        const Eigen::VectorXcd c = sys.atoms().adjoint() * f.values();
        r.max_err_on_range = std::max(r.max_err_on_range, ((mst.matrix.entries() - prod) * c).norm() / c.norm());

        const Eigen::VectorXcd raw = random_coefficients(size, rng);
        const Eigen::VectorXcd perp = raw - p * raw;
        const double pn = std::max(perp.norm(), 1e-300);
        r.max_err_on_complement = std::max(
            {r.max_err_on_complement, (mst.matrix.entries() * perp).norm() / pn, (prod * perp).norm() / pn});
    }

    const double c_alg = check_algebra_weight(spec).worst_ratio;
    r.product_norm = cda_norm(mst.matrix, spec);
    r.factor_norm_bound = c_alg * cda_norm(ms.matrix, spec) * cda_norm(mt.matrix, spec);
    r.twisted_norm = sjostrand_norm(st, sys.window(), spec).sjostrand_norm;
    r.c_lower = r.twisted_norm > 0.0 ? r.product_norm / r.twisted_norm : 0.0;
    const double ns = sjostrand_norm(sigma, sys.window(), spec).sjostrand_norm;
    const double nt = sjostrand_norm(tau, sys.window(), spec).sjostrand_norm;
    r.twisted_bound = r.c_lower > 0.0 ? c_alg / r.c_lower * ns * nt : std::numeric_limits<double>::infinity();
    r.chain_ok = r.product_norm <= r.factor_norm_bound * (1.0 + 1e-10) + 1e-300 &&
                 r.twisted_norm <= r.twisted_bound * (1.0 + 1e-10) + 1e-300;
    return r;
}

double action_constant(const AlgebraSpec& spec, const WeightSpec& y) {
    const auto& lat = spec.lattice;
    const std::size_t size = lat.size();
    std::vector<double> yv(size);
    for (std::size_t i = 0; i < size; ++i) yv[i] = y(lat.point(i), lat.n());
    double acc = 0.0;
    for (std::size_t nu = 0; nu < size; ++nu) {
        double m = 0.0;
        for (std::size_t lam = 0; lam < size; ++lam) m = std::max(m, yv[lat.add(lam, nu)] / yv[lam]);
        const double ratio = m / spec.weight_at(nu);
        acc = spec.q == Exponent::one ? std::max(acc, ratio) : acc + ratio;
    }
    return acc;
}

BoundednessReport boundedness_check(const Symbol& sigma, const GaborSystem& sys, const AlgebraSpec& spec,
                                    const WeightSpec& y, LpExponent p, std::uint64_t seed, int samples) {
    require_tight(sys, "boundedness_check");
    require_spec(sys, spec, "boundedness_check");
    BoundednessReport r;
    r.action_constant = action_constant(spec, y);
    if (!std::isfinite(r.action_constant)) {
        throw Error(ErrorKind::config, "boundedness_check: the algebra does not act on the weighted sequence space");
    }
    const GaborMatrix m = gabor_matrix(sigma, sys);
    r.cda_norm = cda_norm(m.matrix, spec);
    const OperatorMatrix q = quantize(sigma);
    for (int k = 0; k < samples; ++k) {
        const Signal f = random_signal(sys.n(), seed, 0xb0d0u + static_cast<std::uint64_t>(k));
        const double lhs = weighted_norm(analysis(sys, q(f)), y, p);
        const double rhs = r.action_constant * r.cda_norm * weighted_norm(analysis(sys, f), y, p);
        r.max_ratio = std::max(r.max_ratio, rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
    }
    r.ok = r.max_ratio <= 1.0 + 1e-10;
    return r;
}

std::pair<Symbol, InversionReport> invert_symbol(const Symbol& sigma, const GaborSystem& sys, double rtol) {
    require_tight(sys, "invert_symbol");
    const OperatorMatrix q = quantize(sigma);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(q.entries(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    InversionReport r;
    r.condition_ratio = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
    if (!(r.condition_ratio > rtol)) throw Error(ErrorKind::numerical, "operator not invertible at rtol");
    const Eigen::MatrixXcd inv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    Symbol tau = dequantize(OperatorMatrix(inv));

    const GaborMatrix ms = gabor_matrix(sigma, sys);
    const GaborMatrix mt = gabor_matrix(tau, sys);
    const Eigen::MatrixXcd pm = pinv(ms.matrix.entries(), 1e-10);
    r.pinv_match_frob = (mt.matrix.entries() - pm).norm() / std::max(pm.norm(), 1e-300);
    try {
        r.fit_sigma = decay_fit(ms.matrix.envelope());
        r.fit_tau = decay_fit(mt.matrix.envelope());
        r.fits_ok = true;
    } catch (const Error&) {
        r.fits_ok = false;
    }
    return {std::move(tau), r};
}

SpectralReport spectral_invariance_experiment(const Symbol& sigma, const GaborSystem& sys, const AlgebraSpec& spec,
                                              LpExponent p, const WeightSpec& y, std::uint64_t seed, double rtol,
                                              int samples) {
    require_spec(sys, spec, "spectral_invariance_experiment");
    const auto [tau, inv] = invert_symbol(sigma, sys, rtol);
    const OperatorMatrix qs = quantize(sigma);
    const OperatorMatrix qt = quantize(tau);
    SpectralReport r;
    r.tau_cda_norm = cda_norm(gabor_matrix(tau, sys).matrix, spec);
    for (int k = 0; k < samples; ++k) {
        const Signal f = random_signal(sys.n(), seed, 0x5e1fu + static_cast<std::uint64_t>(k));
        const Signal back = qt(qs(f));
        const Signal diff(Eigen::VectorXcd(back.values() - f.values()));
        const double num = weighted_norm(analysis(sys, diff), y, p);
        const double den = weighted_norm(analysis(sys, f), y, p);
        r.max_residual = std::max(r.max_residual, num / std::max(den, 1e-300));
    }
    return r;
}

}  // namespace tfpsi
