#include "tfpsi/molecules.hpp"

#include "tfpsi/parallel.hpp"
#include "tfpsi/rng.hpp"

namespace tfpsi {

namespace {

constexpr double pi = std::numbers::pi;

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// ∫_{−1}^{1} (1 − u²)^n du
double bump_mass(int n) { return std::sqrt(pi) * std::tgamma(n + 1.0) / std::tgamma(n + 1.5); }

/// Representative of t in [−ε, P − ε).
double wrap(double t, double period, double eps) {
    double r = std::fmod(t + eps, period);
    if (r < 0.0) r += period;
    return r - eps;
}

}  // namespace

void BellSpec::validate() const {
    if (!(alpha > 0.0)) throw Error(ErrorKind::config, "BellSpec: alpha must be positive");
    if (!(epsilon > 0.0) || epsilon >= alpha / 2.0) throw Error(ErrorKind::config, "BellSpec: epsilon must lie in (0, alpha/2)");
    if (smoothness < 1) throw Error(ErrorKind::config, "BellSpec: smoothness must be at least 1");
    if (!(grid_step > 0.0)) throw Error(ErrorKind::config, "BellSpec: gridStep must be positive");
}

double BellSpec::zeta(double t) const {
    const double u = t / epsilon;
    if (std::abs(u) >= 1.0) return 0.0;
    const double c = (pi / 2.0) / (epsilon * bump_mass(smoothness));
    return c * std::pow(1.0 - u * u, smoothness);
}

double BellSpec::theta(double t) const {
    if (t <= -epsilon) return 0.0;
    if (t >= epsilon) return pi / 2.0;
    const double u = t / epsilon;
    // ∫_{−1}^{u} (1 − v²)^n dv = Σ_k C(n,k)(−1)^k (u^{2k+1} + 1)/(2k + 1)
    double acc = 0.0;
    for (int k = 0; k <= smoothness; ++k) {
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        acc += sign * binomial(smoothness, k) * (std::pow(u, 2 * k + 1) + 1.0) / (2.0 * k + 1.0);
    }
    return (pi / 2.0) * acc / bump_mass(smoothness);
}

double BellSpec::bell(double t) const { return std::sin(theta(t)) * std::cos(theta(t - alpha)); }

cd inner(const SampledFunction& u, const SampledFunction& v) {
    if (u.size() != v.size()) throw Error(ErrorKind::structural, "inner: grid mismatch");
    cd acc{};
    for (std::size_t j = 0; j < u.size(); ++j) acc += u.samples[j] * std::conj(v.samples[j]);
    return acc * u.step;
}

std::size_t grid_points(const BellSpec& spec, long bells) {
    spec.validate();
    if (bells < 2) throw Error(ErrorKind::config, "bell: need at least two bells per period");
    const double period = spec.alpha * static_cast<double>(bells);
    const double m = period / spec.grid_step;
    const double r = std::round(m);
    if (std::abs(m - r) > 1e-9 * m) throw Error(ErrorKind::config, "bell: period is not a multiple of gridStep");
    return static_cast<std::size_t>(r);
}

SampledFunction bell(const BellSpec& spec, long bells) {
    const std::size_t m = grid_points(spec, bells);
    SampledFunction out{spec.alpha * static_cast<double>(bells), spec.grid_step, std::vector<cd>(m)};
    for (std::size_t j = 0; j < m; ++j) out.samples[j] = spec.bell(wrap(out.t(j), out.period, spec.epsilon));
    return out;
}

SampledFunction local_sine(const BellSpec& spec, long bells, long k, long l) {
    if (bells % 2 != 0) throw Error(ErrorKind::config, "local_sine_basis: period mismatch (K must be even)");
    const std::size_t m = grid_points(spec, bells);
    SampledFunction out{spec.alpha * static_cast<double>(bells), spec.grid_step, std::vector<cd>(m)};
    const double amp = std::sqrt(2.0 / spec.alpha);
    for (std::size_t j = 0; j < m; ++j) {
        const double s = wrap(out.t(j) - spec.alpha * static_cast<double>(k), out.period, spec.epsilon);
        out.samples[j] = amp * spec.bell(s) * std::sin((2.0 * static_cast<double>(l) + 1.0) * pi * s / (2.0 * spec.alpha));
    }
    return out;
}

std::vector<SampledFunction> local_sine_basis(const BellSpec& spec, long bells, long l_max, std::vector<SineIndex>* index) {
    if (bells % 2 != 0) throw Error(ErrorKind::config, "local_sine_basis: period mismatch (K must be even)");
    if (l_max < 1) throw Error(ErrorKind::config, "local_sine_basis: lMax must be at least 1");
    std::vector<SineIndex> idx;
    for (long k = 0; k < bells; ++k) {
        for (long l = 0; l <= l_max; ++l) idx.push_back({k, l});
    }
    std::vector<SampledFunction> out(idx.size());
    parallel_for(idx.size(), [&](std::size_t i) { out[i] = local_sine(spec, bells, idx[i].k, idx[i].l); });
    if (index) *index = std::move(idx);
    return out;
}

KompostReport kompost_decompose(const BellSpec& spec, long bells, long k, long l) {
    const SampledFunction psi = local_sine(spec, bells, k, l);
    const std::size_t m = psi.size();
    const double a = spec.alpha;
    // b± as functions on the torus, sampled at the representative in [−ε, P − ε).
    std::vector<cd> bp(m), bm(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double s = wrap(psi.t(j), psi.period, spec.epsilon);
        const double b = spec.bell(s);
        bp[j] = std::polar(b, pi * s / (2.0 * a));
        bm[j] = std::polar(b, -pi * s / (2.0 * a));
    }
    const double shift_steps = a * static_cast<double>(k) / spec.grid_step;
    const auto shift = static_cast<long>(std::llround(shift_steps));
    if (std::abs(shift_steps - static_cast<double>(shift)) > 1e-9) {
        throw Error(ErrorKind::config, "kompost_decompose: alpha is not a multiple of gridStep");
    }
    const double omega = static_cast<double>(l) / (2.0 * a);
    const cd pre = (((k * l) % 2 == 0) ? 1.0 : -1.0) / cd(0.0, 2.0) * std::sqrt(2.0 / a);
    KompostReport rep;
    const auto ml = static_cast<long>(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double t = psi.t(j);
        const auto src = static_cast<std::size_t>(mod(static_cast<long>(j) - shift, ml));
        // π(x, ω)F(t) = e^{2πiωt} F(t − x)
        const cd plus = std::polar(1.0, 2.0 * pi * omega * t) * bp[src];
        const cd minus = std::polar(1.0, -2.0 * pi * omega * t) * bm[src];
        rep.max_point_err = std::max(rep.max_point_err, std::abs(pre * (plus - minus) - psi.samples[j]));
    }
    return rep;
}

LatticeSeq molecule_bound(const std::vector<Signal>& members, const GaborSystem& sys) {
    const auto& lat = sys.lattice();
    if (members.size() != lat.size()) throw Error(ErrorKind::structural, "molecule_bound: one member per lattice point required");
    std::vector<std::vector<double>> rows(members.size());
    parallel_for(members.size(), [&](std::size_t mu) {
        const LatticeSeq c = analysis(sys, members[mu]);
        std::vector<double> a(lat.size(), 0.0);
        for (std::size_t lam = 0; lam < lat.size(); ++lam) a[lat.sub(lam, mu)] = std::abs(c[lam]);
        rows[mu] = std::move(a);
    });
    std::vector<double> a(lat.size(), 0.0);
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::max(a[i], r[i]);
    }
    return LatticeSeq::from_real(lat, a);
}

MoleculeFamily family_from_members(std::vector<Signal> members, const GaborSystem& sys, double s) {
    LatticeSeq bound = molecule_bound(members, sys);
    const auto& lat = sys.lattice();
    double c2 = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const double r = lat.length(i);
        c2 = std::max(c2, bound[i].real() * std::pow(1.0 + r * r, s / 2.0));
    }
    return MoleculeFamily{std::move(members), std::move(bound), system_id(sys), 0.0, c2, s};
}

MoleculeFamily make_molecules(const GaborSystem& sys, double jitter_bound, double s, std::uint64_t seed) {
    if (!sys.tight()) throw Error(ErrorKind::structural, "make_molecules: Gabor system is not tight");
    if (!(s > 2.0)) throw Error(ErrorKind::config, "make_molecules: decay order s must exceed 2");
    if (jitter_bound < 0.0) throw Error(ErrorKind::config, "make_molecules: jitterBound must be non-negative");
    const long n = sys.n();
    const auto& lat = sys.lattice();
    const Signal base = periodized_gaussian(n);
    const auto reach = static_cast<long>(std::floor(jitter_bound));

    std::vector<Signal> members;
    members.reserve(lat.size());
    double worst_c = 0.0;
    for (std::size_t mu = 0; mu < lat.size(); ++mu) {
        Rng rng(seed, 0x301eu + mu);
        Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(n);
        for (int j = 0; j < 3; ++j) {
            const PhasePoint d{rng.integer(-1, 1), rng.integer(-1, 1)};
            phi += rng.complex_normal() * tf_shift(d, base).values();
        }
        // Rescale so that max_z |V_g φ(z)|⟨z⟩^s = 1; the constant is then re-measured.
        Signal phis(phi);
        const Eigen::MatrixXcd v = stft(phis, sys.window());
        double c = 0.0;
        for (long x = 0; x < n; ++x) {
            for (long xi = 0; xi < n; ++xi) {
                const double r = periodic_norm({x, xi}, n);
                c = std::max(c, std::abs(v(x, xi)) * std::pow(1.0 + r * r, s / 2.0));
            }
        }
        phis = Signal(Eigen::VectorXcd(phi / c));
        const Eigen::MatrixXcd v2 = stft(phis, sys.window());
        for (long x = 0; x < n; ++x) {
            for (long xi = 0; xi < n; ++xi) {
                const double r = periodic_norm({x, xi}, n);
                worst_c = std::max(worst_c, std::abs(v2(x, xi)) * std::pow(1.0 + r * r, s / 2.0));
            }
        }

        PhasePoint jit{0, 0};
        if (reach > 0) {
            do {
                jit = {rng.integer(-reach, reach), rng.integer(-reach, reach)};
            } while (std::hypot(static_cast<double>(jit.x), static_cast<double>(jit.xi)) > jitter_bound);
        }
        const PhasePoint z = add(lat.point(mu), jit, n);
        members.push_back(tf_shift(z, phis));
    }
    MoleculeFamily fam = family_from_members(std::move(members), sys, s);
    fam.decay_constant = worst_c;
    return fam;
}

MoleculeDiagReport molecule_almost_diag(const Symbol& sigma, const GaborSystem& sys, const MoleculeFamily& fam_e,
                                        const MoleculeFamily& fam_f, const AlgebraSpec& spec) {
    const std::string id = system_id(sys);
    if (fam_e.system_id != id || fam_f.system_id != id) {
        throw Error(ErrorKind::structural, "molecule_almost_diag: molecule families belong to a different Gabor system");
    }
    if (!(spec.lattice == sys.lattice())) throw Error(ErrorKind::structural, "molecule_almost_diag: lattice mismatch");
    const auto& lat = sys.lattice();
    const GaborMatrix m = gabor_matrix(sigma, sys);
    const LatticeSeq h_tilde = convolve(convolve(fam_f.bound, involute(fam_e.bound)), envelope_h(m));

    const OperatorMatrix q = quantize(sigma);
    std::vector<double> viol(lat.size(), -std::numeric_limits<double>::infinity());
    parallel_for(lat.size(), [&](std::size_t mu) {
        const Signal image = q(fam_f.members[mu]);
        for (std::size_t lam = 0; lam < lat.size(); ++lam) {
            const double val = std::abs(inner(image, fam_e.members[lam]));
            viol[mu] = std::max(viol[mu], val - h_tilde[lat.sub(lam, mu)].real());
        }
    });
    MoleculeDiagReport rep{h_tilde, 0.0, false};
    const double scale = std::max(h_tilde.max_abs(), 1e-300);
    rep.max_violation = *std::max_element(viol.begin(), viol.end()) / scale;
    rep.ok = rep.max_violation <= 1e-10;
    return rep;
}

cd TrigSymbol::operator()(double t, double omega, double period, double step) const {
    cd acc{};
    for (const auto& term : terms) {
        acc += term.c * std::polar(1.0, 2.0 * pi * (static_cast<double>(term.a) * t / period +
                                                    static_cast<double>(term.n) * step * omega));
    }
    return acc;
}

long TrigSymbol::max_shift() const {
    long r = 0;
    for (const auto& term : terms) r = std::max(r, std::abs(term.n));
    return r;
}

WeylKernel weyl_kernel(const TrigSymbol& sigma, double period, double step, std::size_t m) {
    const auto ml = static_cast<long>(m);
    WeylKernel ker{sigma.max_shift() + 1, Eigen::MatrixXcd()};
    if (2 * ker.reach + 1 > ml) throw Error(ErrorKind::config, "weyl_kernel: symbol too wide for the grid");
    ker.values = Eigen::MatrixXcd(ix(m), 2 * ker.reach + 1);
    const RootTable w(ml);
    parallel_for(m, [&](std::size_t j) {
        const double xj = static_cast<double>(j) * step;
        for (long r = -ker.reach; r <= ker.reach; ++r) {
            // K(j, r) = (1/M) Σ_q σ(x_j + r·step/2, q/P) e^{−2πi r q/M}
            const double mid = xj + static_cast<double>(r) * step / 2.0;
            cd k{};
            for (long q = 0; q < ml; ++q) k += sigma(mid, static_cast<double>(q) / period, period, step) * w(-r * q);
            ker.values(ix(j), r + ker.reach) = k / static_cast<double>(ml);
        }
    });
    return ker;
}

SampledFunction weyl_apply(const WeylKernel& ker, const SampledFunction& f) {
    const std::size_t m = f.size();
    const auto ml = static_cast<long>(m);
    if (ker.values.rows() != ix(m)) throw Error(ErrorKind::structural, "weyl_apply: kernel grid mismatch");
    SampledFunction out{f.period, f.step, std::vector<cd>(m)};
    for (std::size_t j = 0; j < m; ++j) {
        cd acc{};
        for (long r = -ker.reach; r <= ker.reach; ++r) {
            acc += ker.values(ix(j), r + ker.reach) * f.samples[static_cast<std::size_t>(mod(static_cast<long>(j) + r, ml))];
        }
        out.samples[j] = acc;
    }
    return out;
}

SampledFunction weyl_apply(const TrigSymbol& sigma, const SampledFunction& f) {
    return weyl_apply(weyl_kernel(sigma, f.period, f.step, f.size()), f);
}

SineBasisReport sine_basis_almost_diag(const TrigSymbol& sigma, const BellSpec& spec, long bells, long l_max,
                                       const std::vector<double>& s_list) {
    if (spec.grid_step > spec.epsilon / 8.0) {
        throw Error(ErrorKind::config, "sine_basis_almost_diag: quadrature grid too coarse (step > epsilon/8)");
    }
    SineBasisReport rep;
    const std::vector<SampledFunction> basis = local_sine_basis(spec, bells, l_max, &rep.index);
    const std::size_t count = basis.size();
    const WeylKernel ker = weyl_kernel(sigma, basis[0].period, basis[0].step, basis[0].size());
    std::vector<SampledFunction> images(count);
    parallel_for(count, [&](std::size_t i) { images[i] = weyl_apply(ker, basis[i]); });

    rep.matrix = Eigen::MatrixXcd(ix(count), ix(count));
    parallel_for(count, [&](std::size_t row) {
        for (std::size_t col = 0; col < count; ++col) rep.matrix(ix(row), ix(col)) = inner(images[col], basis[row]);
    });

    const double peak = std::max(rep.matrix.cwiseAbs().maxCoeff(), 1e-300);
    rep.symmetry_defect = (rep.matrix - rep.matrix.adjoint()).cwiseAbs().maxCoeff() / peak;

    const double a = spec.alpha;
    for (double s : s_list) {
        double c = 0.0;
        for (std::size_t row = 0; row < count; ++row) {
            for (std::size_t col = 0; col < count; ++col) {
                const auto [k, l] = rep.index[row];
                const auto [kp, lp] = rep.index[col];
                const double dk = a * static_cast<double>(periodic_abs(k - kp, bells));
                const double d1 = static_cast<double>(l - lp) / (2.0 * a);
                const double d2 = static_cast<double>(l + lp) / (2.0 * a);
                const double bound = std::pow(1.0 + dk * dk + d1 * d1, -s / 2.0) + std::pow(1.0 + dk * dk + d2 * d2, -s / 2.0);
                c = std::max(c, std::abs(rep.matrix(ix(row), ix(col))) / bound);
            }
        }
        rep.rows.push_back({s, c});
    }
    return rep;
}

}  // namespace tfpsi
