#include "tfpsi/seqalg.hpp"

#include <limits>
#include <numbers>

namespace tfpsi {

PhaseLattice::PhaseLattice(long n, long alpha, long beta) : n_(n), alpha_(alpha), beta_(beta) {
    require_odd(n, "PhaseLattice");
    if (alpha < 1 || beta < 1 || n % alpha != 0 || n % beta != 0) {
        throw Error(ErrorKind::structural, "PhaseLattice: alpha and beta must be positive divisors of N");
    }
    if (alpha * beta >= n) {
        throw Error(ErrorKind::structural, "PhaseLattice: alpha*beta must be smaller than N");
    }
}

std::size_t PhaseLattice::locate(PhasePoint z) const {
    if (!contains(z)) {
        throw Error(ErrorKind::structural, "PhaseLattice: point (" + std::to_string(z.x) + ", " +
                                               std::to_string(z.xi) + ") is not on the lattice");
    }
    return index(mod(z.x, n_) / alpha_, mod(z.xi, n_) / beta_);
}

std::size_t PhaseLattice::add(std::size_t i, std::size_t j) const {
    const auto [k1, l1] = indices(i);
    const auto [k2, l2] = indices(j);
    return index(k1 + k2, l1 + l2);
}

std::size_t PhaseLattice::sub(std::size_t i, std::size_t j) const {
    const auto [k1, l1] = indices(i);
    const auto [k2, l2] = indices(j);
    return index(k1 - k2, l1 - l2);
}

std::size_t PhaseLattice::neg(std::size_t i) const {
    const auto [k, l] = indices(i);
    return index(-k, -l);
}

double WeightSpec::at_radius(double r) const {
    switch (kind) {
        case Kind::flat:
            return 1.0;
        case Kind::polynomial:
            return std::pow(1.0 + r * r, s / 2.0);
        case Kind::subexponential:
            return std::exp(delta * std::pow(r, b));
    }
    return 1.0;
}

AlgebraSpec AlgebraSpec::make(WeightSpec weight, Exponent q, PhaseLattice lattice) {
    AlgebraSpec spec{weight, q, lattice};
    if (weight.kind == WeightSpec::Kind::polynomial && weight.s < 0.0) {
        throw Error(ErrorKind::config, "AlgebraSpec: polynomial exponent must be non-negative");
    }
    if (weight.kind == WeightSpec::Kind::subexponential && !(weight.delta > 0.0 && weight.b > 0.0 && weight.b < 1.0)) {
        throw Error(ErrorKind::config, "AlgebraSpec: subexponential weight needs delta > 0 and b in (0, 1)");
    }
    if (!spec.admissible()) {
        throw Error(ErrorKind::config,
                    "AlgebraSpec: q = inf requires a weight whose reciprocal is summable on the 2-D lattice "
                    "(polynomial s > 2 or subexponential)");
    }
    return spec;
}

bool AlgebraSpec::admissible() const {
    if (q == Exponent::one) return true;
    switch (weight.kind) {
        case WeightSpec::Kind::flat:
            return false;
        case WeightSpec::Kind::polynomial:
            return weight.s > 2.0;
        case WeightSpec::Kind::subexponential:
            return true;
    }
    return false;
}

LatticeSeq::LatticeSeq(PhaseLattice lattice, std::vector<cd> values) : lattice_(lattice), values_(std::move(values)) {
    if (values_.size() != lattice_.size()) {
        throw Error(ErrorKind::structural, "LatticeSeq: value count does not match lattice size");
    }
}

LatticeSeq LatticeSeq::delta(PhaseLattice lattice, std::size_t at) {
    LatticeSeq d(lattice);
    d[at] = 1.0;
    return d;
}

LatticeSeq LatticeSeq::from_real(PhaseLattice lattice, const std::vector<double>& values) {
    return LatticeSeq(lattice, std::vector<cd>(values.begin(), values.end()));
}

LatticeSeq LatticeSeq::abs() const {
    LatticeSeq out(lattice_);
    for (std::size_t i = 0; i < size(); ++i) out[i] = std::abs(values_[i]);
    return out;
}

double LatticeSeq::max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

void require_same(const PhaseLattice& a, const PhaseLattice& b, const char* op) {
    if (!(a == b)) throw Error(ErrorKind::structural, std::string(op) + ": lattice mismatch");
}

}  // namespace

LatticeSeq convolve(const LatticeSeq& a, const LatticeSeq& b) {
    require_same(a.lattice(), b.lattice(), "convolve");
    const auto& lat = a.lattice();
    LatticeSeq out(lat);
    for (std::size_t lam = 0; lam < lat.size(); ++lam) {
        cd acc{};
        for (std::size_t mu = 0; mu < lat.size(); ++mu) {
            if (a[mu] == cd{}) continue;
            acc += a[mu] * b[lat.sub(lam, mu)];
        }
        out[lam] = acc;
    }
    return out;
}

LatticeSeq involute(const LatticeSeq& a) {
    const auto& lat = a.lattice();
    LatticeSeq out(lat);
    for (std::size_t i = 0; i < lat.size(); ++i) out[i] = std::conj(a[lat.neg(i)]);
    return out;
}

double algebra_norm(const LatticeSeq& a, const AlgebraSpec& spec) {
    require_same(a.lattice(), spec.lattice, "algebra_norm");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double term = std::abs(a[i]) * spec.weight_at(i);
        acc = spec.q == Exponent::one ? acc + term : std::max(acc, term);
    }
    return acc;
}

double weighted_norm(const LatticeSeq& c, const WeightSpec& y, LpExponent p) {
    const auto& lat = c.lattice();
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double term = std::abs(c[i]) * y(lat.point(i), lat.n());
        switch (p) {
            case LpExponent::one:
                acc += term;
                break;
            case LpExponent::two:
                acc += term * term;
                break;
            case LpExponent::infinity:
                acc = std::max(acc, term);
                break;
        }
    }
    return p == LpExponent::two ? std::sqrt(acc) : acc;
}

WeightCheck check_algebra_weight(const AlgebraSpec& spec) {
    const auto& lat = spec.lattice;
    const std::size_t size = lat.size();
    std::vector<double> w(size);
    for (std::size_t i = 0; i < size; ++i) w[i] = spec.weight_at(i);

    if (!spec.admissible()) {
        return {false, std::numeric_limits<double>::infinity()};
    }
    double worst = 0.0;
    if (spec.q == Exponent::one) {
        for (std::size_t i = 0; i < size; ++i) {
            for (std::size_t j = 0; j < size; ++j) {
                worst = std::max(worst, w[lat.add(i, j)] / (w[i] * w[j]));
            }
        }
    } else {
        for (std::size_t lam = 0; lam < size; ++lam) {
            double conv = 0.0;
            for (std::size_t mu = 0; mu < size; ++mu) conv += 1.0 / (w[mu] * w[lat.sub(lam, mu)]);
            worst = std::max(worst, conv * w[lam]);
        }
    }
    return {std::isfinite(worst), worst};
}

std::vector<double> grs_profile(const std::function<double(long, long)>& weight, long k, long l, long n_max) {
    if (n_max < 2) throw Error(ErrorKind::config, "grs_profile: nMax must be at least 2");
    std::vector<double> out(static_cast<std::size_t>(n_max), 1.0);
    if (k == 0 && l == 0) return out;
    for (long n = 1; n <= n_max; ++n) {
        out[static_cast<std::size_t>(n - 1)] = std::pow(weight(n * k, n * l), 1.0 / static_cast<double>(n));
    }
    return out;
}

std::vector<double> grs_profile(const WeightSpec& weight, long k, long l, long n_max) {
    return grs_profile([&weight](long a, long b) { return weight.unwrapped(a, b); }, k, l, n_max);
}

MaximalityReport l1_maximality_check(std::span<const cd> a, long first, long grid_m) {
    if (grid_m < 64) throw Error(ErrorKind::config, "l1_maximality_check: gridM must be at least 64");
    MaximalityReport rep;
    for (const auto& v : a) rep.l1 += std::abs(v);
    if (rep.l1 == 0.0) return rep;
    for (long j = 0; j < grid_m; ++j) {
        const double xi = static_cast<double>(j) / static_cast<double>(grid_m);
        cd acc{};
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double k = static_cast<double>(first + static_cast<long>(i));
            acc += std::abs(a[i]) * std::polar(1.0, -2.0 * std::numbers::pi * k * xi);
        }
        rep.sup_f = std::max(rep.sup_f, std::abs(acc));
    }
    rep.rel_err = std::abs(rep.l1 - rep.sup_f) / rep.l1;
    return rep;
}

}  // namespace tfpsi
