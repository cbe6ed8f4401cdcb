#include "tfpsi/suites.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>

#include "tfpsi/aldiag.hpp"
#include "tfpsi/io.hpp"
#include "tfpsi/molecules.hpp"
#include "tfpsi/presets.hpp"
#include "tfpsi/rng.hpp"
#include "tfpsi/symclass.hpp"
#include "tfpsi/weyl.hpp"

namespace tfpsi {

using nlohmann::json;

namespace {

// Options each suite understands, with their defaults. Anything else under "suite" is rejected.
const json& suite_defaults() {
    static const json d = {
        {"samples", 20},         {"symbols", 5},          {"normSymbols", 20},   {"pairs", 20},
        {"jaffardS", 4.0},       {"jaffardStrength", 0.1}, {"rtol", 1e-8},      {"sList", json::array()},
        {"tailRadius", 6.0},     {"jitter", 2.0},         {"moleculeS", 4.0},    {"bells", 4},
        {"lMax", 15},            {"harmonic", 1},         {"gridM", 4096},       {"tSamples", 0},
        {"grsNMax", 50},         {"ySmoothness", 2.0},    {"l1Length", 16},
    };
    return d;
}

const std::map<std::string, double> kDefaultTolerances = {
    {"parsevalResidual", 1e-10},    {"reconstructionError", 1e-10}, {"covarianceMaxRelErr", 1e-9},
    {"magicMaxRelErr", 1e-10},      {"pointwiseSlack", 1e-11},     {"envelopeSlack", 1e-10},
    {"dominationSlack", 1e-10},     {"normEqSlack", 1e-10},        {"diagramResidual", 1e-10},
    {"kernelLeak", 1e-10},          {"identityErrOnRange", 1e-8},  {"boundednessSlack", 1e-10},
    {"envelopeProductSlack", 1e-12}, {"applySlack", 1e-12},        {"pinvMatchFrob", 1e-8},
    {"spectralResidual", 1e-9},     {"jaffardMargin", 0.5},        {"hormanderTail", 1e-10},
    {"moleculeSlack", 1e-10},       {"gramDeviation", 1e-5},       {"kompostMaxErr", 1e-12},
    {"l1RelErr", 1e-3},             {"fourierMaxErr", 1e-10},      {"grsLast", 1.3},
};

const std::vector<std::string> kSuites = {"frame",     "covariance", "aldiag",    "algebra",  "invert",
                                          "hormander", "molecules",  "sinebasis", "appendix"};

template <class T>
T field(const json& j, const std::string& key, const std::string& path, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorKind::config, "config field '" + path + key + "': wrong type");
    }
}

void reject_unknown(const json& j, const std::vector<std::string>& allowed, const std::string& path) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error(ErrorKind::config, "config field '" + path + key + "': unknown field");
        }
    }
}

std::string metric_suffix(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", s);
    return buf;
}

/// Collects metrics, checks and artifacts for one run.
class Run {
public:
    Run(std::string suite, const ExperimentConfig& c) : c_(c) {
        report_.suite = std::move(suite);
        report_.config = config_echo(c);
    }

    const ExperimentConfig& config() const { return c_; }
    Report& report() { return report_; }

    void metric(const std::string& name, double v) { report_.metrics[name] = v; }
    double metric(const std::string& name) const { return report_.metrics.at(name); }

    double tol(const std::string& key) const {
        const auto it = c_.tolerances.find(key);
        return it != c_.tolerances.end() ? it->second : kDefaultTolerances.at(key);
    }

    template <class T>
    T opt(const std::string& key) const {
        const json& d = suite_defaults().at(key);
        return field<T>(c_.suite, key, "suite.", d.get<T>());
    }

    std::vector<double> s_list(std::vector<double> fallback) const {
        auto v = field<std::vector<double>>(c_.suite, "sList", "suite.", {});
        return v.empty() ? fallback : v;
    }

    // metric ≤ bound; NaN fails.
    void check_le(const std::string& name, double bound) {
        if (!(metric(name) <= bound)) report_.failures.push_back(name);
    }
    void check_lt(const std::string& name, double bound) {
        if (!(metric(name) < bound)) report_.failures.push_back(name);
    }
    void check_ge(const std::string& name, double bound) {
        if (!(metric(name) >= bound)) report_.failures.push_back(name);
    }
    void check_true(const std::string& name) {
        if (metric(name) != 1.0) report_.failures.push_back(name);
    }

    bool writing() const { return !c_.out_dir.empty(); }

    void artifact(const std::string& file, const std::function<void(const fs::path&)>& write) {
        if (!writing()) return;
        fs::create_directories(c_.out_dir);
        write(c_.out_dir / file);
        report_.artifacts.push_back(file);
    }

private:
    const ExperimentConfig& c_;
    Report report_;
};

Signal configured_window(const ExperimentConfig& c) {
    if (c.window_kind == "customFile") {
        if (c.window_file.empty()) throw Error(ErrorKind::config, "config field 'windowFile': required for customFile");
        Signal g = load_signal(c.window_file);
        if (g.n() != c.n) throw Error(ErrorKind::structural, "windowFile: window length differs from n");
        return g;
    }
    return named_window(c.window_kind, c.n);
}

std::uint64_t symbol_seed(const ExperimentConfig& c, long index) {
    return c.symbol.seed.value_or(c.seed) + static_cast<std::uint64_t>(index);
}

Symbol make_symbol(const ExperimentConfig& c, const std::string& fallback, long index = 0) {
    const std::string kind = c.symbol.kind == "default" ? fallback : c.symbol.kind;
    const std::uint64_t seed = symbol_seed(c, index);
    if (kind == "constant") return Symbol::constant(c.n, c.symbol.amplitude);
    if (kind == "bump") return bump_symbol(c.n, c.symbol.amplitude);
    if (kind == "trigPoly") return trig_poly_symbol(c.n, c.symbol.degree, seed);
    if (kind == "randomBandlimited") return random_bandlimited_symbol(c.n, c.symbol.bandwidth, seed);
    if (kind == "rough") return rough_symbol(c.n, seed);
    if (kind == "fromFile") {
        if (c.symbol.path.empty()) throw Error(ErrorKind::config, "config field 'symbol.path': required for fromFile");
        Symbol s = load_symbol(c.symbol.path);
        if (s.n() != c.n) throw Error(ErrorKind::structural, "symbol.path: symbol size differs from n");
        return s;
    }
    throw Error(ErrorKind::config, "config field 'symbol.preset': unknown preset '" + kind + "'");
}

std::vector<std::vector<double>> sequence_rows(const LatticeSeq& a) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto [k, l] = a.lattice().indices(i);
        rows.push_back({static_cast<double>(k), static_cast<double>(l), a.lattice().length(i), std::abs(a[i])});
    }
    return rows;
}

void save_envelope(Run& run, const std::string& file, const LatticeSeq& a) {
    run.artifact(file, [&](const fs::path& p) { save_table(p, {"k", "l", "length", "value"}, sequence_rows(a)); });
}



void suite_frame(Run& run) {
    const auto& c = run.config();
    const GaborSystem sys = tighten(configured_window(c), c.lattice());
    const int samples = run.opt<int>("samples");

    double parseval = 0.0;
    double recon = 0.0;
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < samples; ++i) {
        const Signal f = random_signal(c.n, c.seed, static_cast<std::uint64_t>(i));
        const double energy = f.values().squaredNorm();
        const LatticeSeq coef = analysis(sys, f);
        double sum = 0.0;
        for (const cd& v : coef.values()) sum += std::norm(v);
        const double res = std::abs(sum - energy) / energy;
        const double rec = (synthesis(sys, coef).values() - f.values()).norm() / f.norm();
        parseval = std::max(parseval, res);
        recon = std::max(recon, rec);
        rows.push_back({static_cast<double>(i), res, rec});
    }
    run.metric("tightnessError", sys.tightness_error());
    run.metric("parsevalResidual", parseval);
    run.metric("reconstructionError", recon);
    run.metric("latticeSize", static_cast<double>(c.lattice().size()));
    run.metric("redundancy", static_cast<double>(c.lattice().size()) / static_cast<double>(c.n));
    run.check_le("parsevalResidual", run.tol("parsevalResidual"));
    run.check_le("reconstructionError", run.tol("reconstructionError"));

    run.artifact("window.csv", [&](const fs::path& p) { save_signal(sys.window(), p); });
    run.artifact("parseval.csv", [&](const fs::path& p) { save_table(p, {"sample", "parsevalResidual", "reconstructionError"}, rows); });
}

void suite_covariance(Run& run) {
    const auto& c = run.config();
    const Signal g = configured_window(c);
    const Symbol sigma = make_symbol(c, "randomBandlimited");
    const CovarianceReport cov = covariance_check(sigma, g);
    const MagicReport magic = magic_formula_check(g);
    run.metric("covarianceMaxRelErr", cov.max_rel_err);
    run.metric("covarianceReadbackRelErr", cov.readback_rel_err);
    run.metric("covariancePairs", static_cast<double>(cov.pairs));
    run.metric("magicMaxRelErr", magic.max_rel_err);
    run.metric("magicScale", magic.scale);
    run.check_le("covarianceMaxRelErr", run.tol("covarianceMaxRelErr"));
    run.check_le("covarianceReadbackRelErr", run.tol("covarianceMaxRelErr"));
    run.check_le("magicMaxRelErr", run.tol("magicMaxRelErr"));

    run.artifact("symbol.csv", [&](const fs::path& p) { save_symbol(sigma, p); });
    run.artifact("grand_symbol.csv", [&](const fs::path& p) {
        save_grand_symbol(grand_symbol(sigma, weyl_window(g), c.window_kind), p);
    });
}

void suite_aldiag(Run& run) {
    const auto& c = run.config();
    const GaborSystem sys = tighten(configured_window(c), c.lattice());
    const AlgebraSpec spec = c.algebra();
    const int symbols = run.opt<int>("symbols");

    double pointwise = -std::numeric_limits<double>::infinity();
    double env = pointwise;
    double dom = pointwise;
    double amalgam_ratio = 0.0;
    bool amalgam_ok = true;
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < symbols; ++i) {
        const Symbol sigma = make_symbol(c, "randomBandlimited", i);
        const ChainReport ch = aldiag_chain(sigma, sys, spec);
        pointwise = std::max(pointwise, ch.pointwise_violation);
        env = std::max(env, ch.envelope_violation);
        dom = std::max(dom, ch.domination_violation);
        amalgam_ok = amalgam_ok && ch.bound.ok;
        amalgam_ratio = std::max(amalgam_ratio, ch.bound.h_amalgam / ch.bound.rhs);
        rows.push_back({static_cast<double>(i), ch.pointwise_violation, ch.envelope_violation, ch.domination_violation,
                        ch.bound.h_amalgam, ch.bound.middle, ch.bound.rhs, ch.bound.algebra_constant});
        if (i == 0) {
            run.metric("dominationConstant", ch.bound.constant);
            run.metric("dominationAlgebraConstant", ch.bound.algebra_constant);
        }
    }
    run.metric("pointwiseViolation", pointwise);
    run.metric("envelopeViolation", env);
    run.metric("dominationViolation", dom);
    run.metric("amalgamBoundRatio", amalgam_ratio);
    run.metric("amalgamBoundHolds", amalgam_ok ? 1.0 : 0.0);
    run.check_le("pointwiseViolation", run.tol("pointwiseSlack"));
    run.check_le("envelopeViolation", run.tol("envelopeSlack"));
    run.check_le("dominationViolation", run.tol("dominationSlack"));
    run.check_true("amalgamBoundHolds");

    // Upper norm inequality over two fixed algebras, independent of the configured one.
    const std::vector<std::pair<std::string, AlgebraSpec>> specs = {
        {"L1Flat", AlgebraSpec::make(WeightSpec::flat(), Exponent::one, c.lattice())},
        {"LInfPoly3", AlgebraSpec::make(WeightSpec::polynomial(3.0), Exponent::infinity, c.lattice())},
    };
    const int norm_symbols = run.opt<int>("normSymbols");
    std::vector<std::vector<double>> norm_rows;
    for (std::size_t k = 0; k < specs.size(); ++k) {
        double worst = 0.0;
        double c_lower = std::numeric_limits<double>::infinity();
        for (int i = 0; i < norm_symbols; ++i) {
            const Symbol sigma = make_symbol(c, "randomBandlimited", 100 + i);
            const NormEquivalence ne = norm_equivalence_check(sigma, sys, specs[k].second);
            worst = std::max(worst, ne.matrix_norm / ne.symbol_norm);
            c_lower = std::min(c_lower, ne.c_lower);
            norm_rows.push_back({static_cast<double>(k), static_cast<double>(i), ne.matrix_norm, ne.symbol_norm, ne.c_lower});
        }
        run.metric("normEqMaxRatio" + specs[k].first, worst);
        run.metric("normEqMinCLower" + specs[k].first, c_lower);
        run.check_le("normEqMaxRatio" + specs[k].first, 1.0 + run.tol("normEqSlack"));
    }

    const Symbol sigma0 = make_symbol(c, "randomBandlimited", 0);
    const GaborMatrix m = gabor_matrix(sigma0, sys, "symbol0", c.seed);
    const StructureReport st = matrix_structure_check(m, sys, c.seed, 10);
    run.metric("diagramResidual", m.diagram_residual);
    run.metric("kernelLeak", st.kernel_leak);
    run.metric("rangeLeak", st.range_leak);
    run.check_le("diagramResidual", run.tol("diagramResidual"));
    run.check_le("kernelLeak", run.tol("kernelLeak"));
    run.check_le("rangeLeak", run.tol("kernelLeak"));

    run.artifact("chain.csv", [&](const fs::path& p) {
        save_table(p, {"symbol", "pointwise", "envelope", "domination", "hAmalgam", "middle", "rhs", "algebraConstant"}, rows);
    });
    run.artifact("norm_equivalence.csv", [&](const fs::path& p) {
        save_table(p, {"spec", "symbol", "matrixNorm", "symbolNorm", "cLower"}, norm_rows);
    });
    run.artifact("gabor_matrix.csv", [&](const fs::path& p) { save_matrix(m.matrix, p); });
    save_envelope(run, "envelope.csv", envelope_h(m));
}

void suite_algebra(Run& run) {
    const auto& c = run.config();
    const PhaseLattice lat = c.lattice();
    const GaborSystem sys = tighten(configured_window(c), lat);
    const AlgebraSpec spec = c.algebra();
    const Symbol sigma = make_symbol(c, "randomBandlimited", 0);
    const Symbol tau = make_symbol(c, "randomBandlimited", 1);

    const AlgebraIdentityReport id = algebra_identity_check(sigma, tau, sys, spec, c.seed, 10);
    run.metric("identityErrOnRange", id.max_err_on_range);
    run.metric("identityErrOnComplement", id.max_err_on_complement);
    run.metric("productNorm", id.product_norm);
    run.metric("factorNormBound", id.factor_norm_bound);
    run.metric("twistedNorm", id.twisted_norm);
    run.metric("twistedBound", id.twisted_bound);
    run.metric("normChainHolds", id.chain_ok ? 1.0 : 0.0);
    run.check_le("identityErrOnRange", run.tol("identityErrOnRange"));
    run.check_true("normChainHolds");

    const WeightSpec y = WeightSpec::polynomial(run.opt<double>("ySmoothness"));
    const std::vector<std::pair<std::string, LpExponent>> ps = {
        {"P1", LpExponent::one}, {"P2", LpExponent::two}, {"PInf", LpExponent::infinity}};
    std::vector<std::vector<double>> bound_rows;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const BoundednessReport b = boundedness_check(sigma, sys, spec, y, ps[k].second, c.seed, 10);
        run.metric("boundednessMaxRatio" + ps[k].first, b.max_ratio);
        run.check_le("boundednessMaxRatio" + ps[k].first, 1.0 + run.tol("boundednessSlack"));
        if (k == 0) {
            run.metric("actionConstant", b.action_constant);
            run.metric("matrixNorm", b.cda_norm);
        }
        bound_rows.push_back({static_cast<double>(k), b.max_ratio, b.action_constant, b.cda_norm});
    }

    // Envelope submultiplicativity and the convolution bound for matrix-vector products.
    const int pairs = run.opt<int>("pairs");
    double product = -std::numeric_limits<double>::infinity();
    double apply_ratio = 0.0;
    std::vector<std::vector<double>> prod_rows;
    for (int i = 0; i < pairs; ++i) {
        const CDMatrix a = synthetic_jaffard(lat, 3.0, c.seed + 2 * static_cast<std::uint64_t>(i), 0.5);
        const CDMatrix b = synthetic_jaffard(lat, 3.0, c.seed + 2 * static_cast<std::uint64_t>(i) + 1, 0.5);
        const ProductBoundReport pb = envelope_product_bound(a, b);
        const double rel = pb.max_violation / pb.scale;
        product = std::max(product, rel);

        Rng rng(c.seed, 0xa991u + static_cast<std::uint64_t>(i));
        std::vector<cd> cv(lat.size());
        for (auto& v : cv) v = rng.complex_normal();
        const auto [ac, ar] = apply(a, LatticeSeq(lat, cv), spec);
        apply_ratio = std::max(apply_ratio, ar.lhs / ar.rhs);
        prod_rows.push_back({static_cast<double>(i), rel, ar.lhs / ar.rhs});
    }
    run.metric("envelopeProductViolation", product);
    run.metric("applyMaxRatio", apply_ratio);
    run.check_le("envelopeProductViolation", run.tol("envelopeProductSlack"));
    run.check_le("applyMaxRatio", 1.0 + run.tol("applySlack"));

    run.artifact("boundedness.csv", [&](const fs::path& p) { save_table(p, {"p", "maxRatio", "actionConstant", "matrixNorm"}, bound_rows); });
    run.artifact("envelope_product.csv", [&](const fs::path& p) { save_table(p, {"pair", "violation", "applyRatio"}, prod_rows); });
}

void suite_invert(Run& run) {
    const auto& c = run.config();
    const PhaseLattice lat = c.lattice();
    const GaborSystem sys = tighten(configured_window(c), lat);
    const AlgebraSpec spec = c.algebra();
    const double rtol = run.opt<double>("rtol");
    const Symbol sigma = make_symbol(c, "bump");

    const auto [tau, inv] = invert_symbol(sigma, sys, rtol);
    run.metric("pinvMatchFrob", inv.pinv_match_frob);
    run.metric("conditionRatio", inv.condition_ratio);
    run.metric("fitSigmaS", inv.fit_sigma.s_hat);
    run.metric("fitTauS", inv.fit_tau.s_hat);
    run.check_le("pinvMatchFrob", run.tol("pinvMatchFrob"));

    const SpectralReport sp = spectral_invariance_experiment(sigma, sys, spec, LpExponent::two, WeightSpec::flat(), c.seed, rtol, 10);
    run.metric("spectralResidual", sp.max_residual);
    run.metric("tauMatrixNorm", sp.tau_cda_norm);
    run.check_le("spectralResidual", run.tol("spectralResidual"));

    // Decay preservation for a synthetic I + K with polynomially decaying K.
    const double s = run.opt<double>("jaffardS");
    const CDMatrix a = synthetic_jaffard(lat, s, c.seed, run.opt<double>("jaffardStrength"));
    const CDMatrix a_inv = pinv(a, 1e-10);
    const DecayFit fa = decay_fit(envelope(a));
    const DecayFit fi = decay_fit(envelope(a_inv));
    run.metric("jaffardFitA", fa.s_hat);
    run.metric("jaffardFitInverse", fi.s_hat);
    run.metric("jaffardFitResidual", fi.residual);
    run.check_ge("jaffardFitInverse", s - run.tol("jaffardMargin"));

    run.artifact("tau.csv", [&](const fs::path& p) { save_symbol(tau, p); });
    save_envelope(run, "jaffard_inverse_envelope.csv", envelope(a_inv));
}

void suite_hormander(Run& run) {
    const auto& c = run.config();
    const GaborSystem sys = tighten(configured_window(c), c.lattice());
    const Symbol sigma = make_symbol(c, "trigPoly");
    const std::vector<double> s_list = run.s_list({0, 2, 4, 6, 8});
    const HormanderReport h = hormander_profile(sigma, sys.window(), s_list, run.opt<double>("tailRadius"));

    run.metric("tailMax", h.tail_max);
    run.metric("tailRadius", h.tail_radius);
    run.metric("fitS", h.fit.s_hat);
    run.metric("fitC", h.fit.c_hat);
    run.metric("fitResidual", h.fit.residual);
    bool finite = true;
    std::vector<std::vector<double>> rows;
    for (const auto& r : h.rows) {
        run.metric("cS_" + metric_suffix(r.s), r.c_s);
        finite = finite && std::isfinite(r.c_s);
        rows.push_back({r.s, r.c_s});
    }
    run.metric("cSFinite", finite ? 1.0 : 0.0);
    run.check_le("tailMax", run.tol("hormanderTail"));
    run.check_true("cSFinite");

    run.artifact("hormander.csv", [&](const fs::path& p) { save_table(p, {"s", "cS"}, rows); });
    save_envelope(run, "envelope.csv", h.envelope);
}

void suite_molecules(Run& run) {
    const auto& c = run.config();
    const PhaseLattice lat = c.lattice();
    const GaborSystem sys = tighten(configured_window(c), lat);
    const double s = run.opt<double>("moleculeS");
    const double jitter = run.opt<double>("jitter");
    const AlgebraSpec spec = AlgebraSpec::make(WeightSpec::polynomial(s), Exponent::infinity, lat);
    const Symbol sigma = make_symbol(c, "bump");

    const MoleculeFamily fe = make_molecules(sys, jitter, s, c.seed);
    const MoleculeFamily ff = make_molecules(sys, jitter, s, c.seed + 1);
    const MoleculeDiagReport rep = molecule_almost_diag(sigma, sys, fe, ff, spec);
    run.metric("moleculeViolation", rep.max_violation);
    run.metric("decayConstantE", fe.decay_constant);
    run.metric("decayConstantF", ff.decay_constant);
    run.metric("shiftedConstantE", fe.shifted_constant);
    run.metric("shiftedConstantF", ff.shifted_constant);
    run.metric("hTildeMax", rep.h_tilde.max_abs());
    run.check_le("moleculeViolation", run.tol("moleculeSlack"));

    // The frame atoms themselves form a molecule family.
    std::vector<Signal> atoms;
    for (std::size_t i = 0; i < lat.size(); ++i) atoms.push_back(tf_shift(lat.point(i), sys.window()));
    const MoleculeFamily fa = family_from_members(std::move(atoms), sys, s);
    const MoleculeDiagReport rep_a = molecule_almost_diag(sigma, sys, fa, fa, spec);
    run.metric("frameFamilyViolation", rep_a.max_violation);
    run.check_le("frameFamilyViolation", run.tol("moleculeSlack"));

    save_envelope(run, "h_tilde.csv", rep.h_tilde);
    save_envelope(run, "bound_e.csv", fe.bound);
    save_envelope(run, "bound_f.csv", ff.bound);
}

void suite_sinebasis(Run& run) {
    const auto& c = run.config();
    const BellSpec bs;
    const long bells = run.opt<long>("bells");
    const long l_max = run.opt<long>("lMax");
    std::vector<SineIndex> index;
    const auto basis = local_sine_basis(bs, bells, l_max, &index);

    double gram = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            gram = std::max(gram, std::abs(inner(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)));
        }
    }
    double kompost = 0.0;
    for (long k = 0; k < bells; ++k) {
        for (long l = 0; l <= l_max; ++l) kompost = std::max(kompost, kompost_decompose(bs, bells, k, l).max_point_err);
    }
    // Σ_k |b(t − αk)|² = 1 on the period.
    const SampledFunction b = bell(bs, bells);
    const std::size_t m = b.size();
    const std::size_t shift = m / static_cast<std::size_t>(bells);
    double partition = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (long k = 0; k < bells; ++k) acc += std::norm(b.samples[(j + m - static_cast<std::size_t>(k) * shift) % m]);
        partition = std::max(partition, std::abs(acc - 1.0));
    }

    const bool constant = c.symbol.kind == "constant";
    const TrigSymbol sigma = constant ? TrigSymbol::constant(c.symbol.amplitude) : TrigSymbol::cosine(run.opt<long>("harmonic"));
    const SineBasisReport rep = sine_basis_almost_diag(sigma, bs, bells, l_max, run.s_list({2, 3, 4}));

    run.metric("basisSize", static_cast<double>(basis.size()));
    run.metric("gramDeviation", gram);
    run.metric("kompostMaxErr", kompost);
    run.metric("bellPartitionErr", partition);
    run.metric("symmetryDefect", rep.symmetry_defect);
    bool finite = true;
    std::vector<std::vector<double>> rows;
    for (const auto& r : rep.rows) {
        run.metric("cS_" + metric_suffix(r.s), r.c_s);
        finite = finite && std::isfinite(r.c_s);
        rows.push_back({r.s, r.c_s});
    }
    run.metric("cSFinite", finite ? 1.0 : 0.0);
    run.check_le("gramDeviation", run.tol("gramDeviation"));
    run.check_le("kompostMaxErr", run.tol("kompostMaxErr"));
    run.check_true("cSFinite");

    run.artifact("sinebasis_cs.csv", [&](const fs::path& p) { save_table(p, {"s", "cS"}, rows); });
    run.artifact("sinebasis_matrix.csv", [&](const fs::path& p) {
        std::vector<std::vector<double>> mrows;
        for (Eigen::Index i = 0; i < rep.matrix.rows(); ++i) {
            for (Eigen::Index j = 0; j < rep.matrix.cols(); ++j) {
                const auto& a = rep.index[static_cast<std::size_t>(i)];
                const auto& b2 = rep.index[static_cast<std::size_t>(j)];
                mrows.push_back({static_cast<double>(a.k), static_cast<double>(a.l), static_cast<double>(b2.k), static_cast<double>(b2.l),
                                 rep.matrix(i, j).real(), rep.matrix(i, j).imag()});
            }
        }
        save_table(p, {"k", "l", "kPrime", "lPrime", "re", "im"}, mrows);
    });
}

void suite_appendix(Run& run) {
    const auto& c = run.config();
    const PhaseLattice lat = c.lattice();

    const long len = run.opt<long>("l1Length");
    Rng rng(c.seed, 0xa11u);
    std::vector<cd> a(static_cast<std::size_t>(len));
    for (auto& v : a) v = rng.complex_normal();
    const MaximalityReport l1 = l1_maximality_check(a, -len / 2, run.opt<long>("gridM"));
    run.metric("l1Norm", l1.l1);
    run.metric("l1SupF", l1.sup_f);
    run.metric("l1RelErr", l1.rel_err);
    run.check_le("l1RelErr", run.tol("l1RelErr"));

    long t = run.opt<long>("tSamples");
    if (t <= 0) {
        const long base = std::lcm(lat.rows(), lat.cols());
        t = base;
        while (t < 32) t += base;
    }
    const CDMatrix m = synthetic_jaffard(lat, 3.0, c.seed, 0.1);
    const FourierReport fr = diagonal_fourier_check(m, t);
    run.metric("fourierMaxErr", fr.max_err);
    run.metric("fourierSamples", static_cast<double>(fr.samples));
    run.check_le("fourierMaxErr", run.tol("fourierMaxErr"));

    const long n_max = run.opt<long>("grsNMax");
    const auto poly = grs_profile(WeightSpec::polynomial(3.0), 1, 0, n_max);
    const auto sub = grs_profile(WeightSpec::subexponential(), 1, 0, n_max);
    bool decreasing = true;
    for (std::size_t i = poly.size() >= 10 ? poly.size() - 10 : 1; i < poly.size(); ++i) {
        if (i > 0 && !(poly[i] < poly[i - 1])) decreasing = false;
    }
    run.metric("grsLast", poly.back());
    run.metric("grsSubexpLast", sub.back());
    run.metric("grsDecreasingTail", decreasing ? 1.0 : 0.0);
    run.check_lt("grsLast", run.tol("grsLast"));
    run.check_true("grsDecreasingTail");

    run.artifact("grs.csv", [&](const fs::path& p) {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < poly.size(); ++i) rows.push_back({static_cast<double>(i + 1), poly[i], sub[i]});
        save_table(p, {"n", "polynomial3", "subexponential"}, rows);
    });
}

}  // namespace

const std::vector<std::string>& suite_names() { return kSuites; }

const std::map<std::string, double>& default_tolerances() { return kDefaultTolerances; }

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::config, "config: expected a JSON object");
    reject_unknown(j, {"n", "alpha", "beta", "windowKind", "windowFile", "algebra", "symbol", "seed", "outDir", "tolerances", "suite"}, "");
    ExperimentConfig c;
    c.n = field<long>(j, "n", "", c.n);
    c.alpha = field<long>(j, "alpha", "", c.alpha);
    c.beta = field<long>(j, "beta", "", c.beta);
    c.window_kind = field<std::string>(j, "windowKind", "", c.window_kind);
    c.window_file = field<std::string>(j, "windowFile", "", c.window_file);
    c.seed = field<std::uint64_t>(j, "seed", "", c.seed);
    c.out_dir = field<std::string>(j, "outDir", "", "");

    if (j.contains("algebra")) {
        const json& a = j.at("algebra");
        if (!a.is_object()) throw Error(ErrorKind::config, "config field 'algebra': expected an object");
        reject_unknown(a, {"weightKind", "s", "delta", "b", "q"}, "algebra.");
        try {
            c.weight = weight_spec_from_json(a);
        } catch (const json::exception&) {
            throw Error(ErrorKind::config, "config field 'algebra': wrong type");
        }
        if (a.contains("q")) {
            const json& q = a.at("q");
            if (q.is_string() && (q == "inf" || q == "infinity")) c.q = Exponent::infinity;
            else if (q.is_number() && q.get<double>() == 1.0) c.q = Exponent::one;
            else throw Error(ErrorKind::config, "config field 'algebra.q': expected 1 or \"inf\"");
        }
    }
    if (j.contains("symbol")) {
        const json& s = j.at("symbol");
        if (!s.is_object()) throw Error(ErrorKind::config, "config field 'symbol': expected an object");
        reject_unknown(s, {"preset", "amplitude", "degree", "bandwidth", "seed", "path"}, "symbol.");
        c.symbol.kind = field<std::string>(s, "preset", "symbol.", c.symbol.kind);
        c.symbol.amplitude = field<double>(s, "amplitude", "symbol.", c.symbol.amplitude);
        c.symbol.degree = field<long>(s, "degree", "symbol.", c.symbol.degree);
        c.symbol.bandwidth = field<long>(s, "bandwidth", "symbol.", c.symbol.bandwidth);
        if (s.contains("seed")) c.symbol.seed = field<std::uint64_t>(s, "seed", "symbol.", 0);
        c.symbol.path = field<std::string>(s, "path", "symbol.", "");
    }
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        if (!t.is_object()) throw Error(ErrorKind::config, "config field 'tolerances': expected an object");
        for (const auto& [key, value] : t.items()) {
            if (!kDefaultTolerances.contains(key)) throw Error(ErrorKind::config, "config field 'tolerances." + key + "': unknown tolerance");
            if (!value.is_number()) throw Error(ErrorKind::config, "config field 'tolerances." + key + "': expected a number");
            c.tolerances[key] = value.get<double>();
        }
    }
    if (j.contains("suite")) {
        const json& s = j.at("suite");
        if (!s.is_object()) throw Error(ErrorKind::config, "config field 'suite': expected an object");
        for (const auto& [key, value] : s.items()) {
            if (!suite_defaults().contains(key)) throw Error(ErrorKind::config, "config field 'suite." + key + "': unknown option");
        }
        c.suite = s;
    }
    return c;
}

json config_echo(const ExperimentConfig& c) {
    json algebra = to_json(c.weight);
    algebra["q"] = c.q == Exponent::one ? json(1) : json("inf");
    json symbol = {{"preset", c.symbol.kind}, {"amplitude", c.symbol.amplitude}, {"degree", c.symbol.degree},
                   {"bandwidth", c.symbol.bandwidth}};
    if (c.symbol.seed) symbol["seed"] = *c.symbol.seed;
    if (!c.symbol.path.empty()) symbol["path"] = c.symbol.path;
    json tolerances(kDefaultTolerances);
    for (const auto& [k, v] : c.tolerances) tolerances[k] = v;
    json suite = suite_defaults();
    suite.update(c.suite);
    json echo = {{"n", c.n},         {"alpha", c.alpha},          {"beta", c.beta},   {"windowKind", c.window_kind},
                 {"algebra", algebra}, {"symbol", symbol},        {"seed", c.seed},   {"tolerances", tolerances},
                 {"suite", suite}};
    if (!c.window_file.empty()) echo["windowFile"] = c.window_file;
    return echo;
}

json to_json(const Report& r) {
    return {{"suiteName", r.suite}, {"configEcho", r.config}, {"metrics", json(r.metrics)}, {"failures", r.failures},
            {"artifacts", r.artifacts}, {"pass", r.pass}, {"wallTimeMs", r.wall_time_ms}};
}

std::string report_bytes_without_timing(const Report& r) {
    json j = to_json(r);
    j.erase("wallTimeMs");
    return j.dump(2);
}

Report run_suite(const std::string& name, const ExperimentConfig& config) {
    static const std::map<std::string, void (*)(Run&)> table = {
        {"frame", suite_frame},         {"covariance", suite_covariance}, {"aldiag", suite_aldiag},
        {"algebra", suite_algebra},     {"invert", suite_invert},         {"hormander", suite_hormander},
        {"molecules", suite_molecules}, {"sinebasis", suite_sinebasis},   {"appendix", suite_appendix},
    };
    const auto it = table.find(name);
    if (it == table.end()) throw Error(ErrorKind::config, "subcommand: unknown suite '" + name + "'");

    const auto t0 = std::chrono::steady_clock::now();
    Run run(name, config);
    it->second(run);
    Report& r = run.report();
    r.pass = r.failures.empty();
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (run.writing()) {
        fs::create_directories(config.out_dir);
        std::ofstream out(config.out_dir / "report.json", std::ios::trunc);
        if (!out) throw Error(ErrorKind::config, (config.out_dir / "report.json").string() + ": cannot open for writing");
        out << to_json(r).dump(2) << '\n';
    }
    return r;
}

}  // namespace tfpsi
