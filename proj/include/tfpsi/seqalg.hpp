#pragma once

// Lattices in the finite phase plane, weights, and solid convolution algebras of sequences.

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "tfpsi/core.hpp"

namespace tfpsi {

/// Separable lattice {(k·alpha, l·beta)} in Z_N x Z_N. Points are enumerated k-major then l.
class PhaseLattice {
public:
    PhaseLattice(long n, long alpha, long beta);

    long n() const { return n_; }
    long alpha() const { return alpha_; }
    long beta() const { return beta_; }
    long rows() const { return n_ / alpha_; }  // number of distinct k
    long cols() const { return n_ / beta_; }   // number of distinct l
    std::size_t size() const { return static_cast<std::size_t>(rows() * cols()); }

    std::size_t index(long k, long l) const {
        return static_cast<std::size_t>(mod(k, rows()) * cols() + mod(l, cols()));
    }
    std::pair<long, long> indices(std::size_t i) const {
        return {static_cast<long>(i) / cols(), static_cast<long>(i) % cols()};
    }
    PhasePoint point(std::size_t i) const {
        const auto [k, l] = indices(i);
        return {k * alpha_, l * beta_};
    }
    /// Index of a phase-plane point that lies on the lattice; throws otherwise.
    std::size_t locate(PhasePoint z) const;
    bool contains(PhasePoint z) const {
        return mod(z.x, n_) % alpha_ == 0 && mod(z.xi, n_) % beta_ == 0;
    }

    std::size_t add(std::size_t i, std::size_t j) const;
    std::size_t sub(std::size_t i, std::size_t j) const;
    std::size_t neg(std::size_t i) const;

    /// Periodic Euclidean length of lattice point i in phase-plane units.
    double length(std::size_t i) const { return periodic_norm(point(i), n_); }

    friend bool operator==(const PhaseLattice&, const PhaseLattice&) = default;

private:
    long n_;
    long alpha_;
    long beta_;
};

struct WeightSpec {
    enum class Kind { flat, polynomial, subexponential };

    Kind kind = Kind::flat;
    double s = 0.0;       // polynomial exponent
    double delta = 0.2;   // subexponential rate
    double b = 0.5;       // subexponential power, in (0, 1)

    static WeightSpec flat() { return {}; }
    static WeightSpec polynomial(double s) { return {Kind::polynomial, s, 0.2, 0.5}; }
    static WeightSpec subexponential(double delta = 0.2, double b = 0.5) {
        return {Kind::subexponential, 0.0, delta, b};
    }

    /// Weight as a function of the Euclidean length |λ|.
    double at_radius(double r) const;
    /// Weight on Z_N x Z_N using the periodic metric.
    double operator()(PhasePoint z, long n) const { return at_radius(periodic_norm(z, n)); }
    /// Weight on the unwrapped plane Z^2.
    double unwrapped(long k, long l) const {
        return at_radius(std::hypot(static_cast<double>(k), static_cast<double>(l)));
    }

    friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

enum class Exponent { one, infinity };

struct AlgebraSpec {
    WeightSpec weight;
    Exponent q = Exponent::one;
    PhaseLattice lattice;

    /// Validating constructor: q = 1 needs a submultiplicative weight (all supported kinds are),
    /// q = ∞ needs a reciprocal summable on the infinite 2-D lattice (polynomial s > 2 or subexponential).
    static AlgebraSpec make(WeightSpec weight, Exponent q, PhaseLattice lattice);
    bool admissible() const;

    double weight_at(std::size_t i) const { return weight(lattice.point(i), lattice.n()); }

    friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;
};

class LatticeSeq {
public:
    explicit LatticeSeq(PhaseLattice lattice) : lattice_(lattice), values_(lattice.size(), cd{}) {}
    LatticeSeq(PhaseLattice lattice, std::vector<cd> values);

    static LatticeSeq delta(PhaseLattice lattice, std::size_t at);
    static LatticeSeq from_real(PhaseLattice lattice, const std::vector<double>& values);

    const PhaseLattice& lattice() const { return lattice_; }
    std::size_t size() const { return values_.size(); }
    cd& operator[](std::size_t i) { return values_[i]; }
    const cd& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<cd>& values() const { return values_; }

    LatticeSeq abs() const;
    double max_abs() const;

private:
    PhaseLattice lattice_;
    std::vector<cd> values_;
};

/// Sequence-space exponent for ℓ^p_y norms.
enum class LpExponent { one, two, infinity };

/// ‖c·y‖_p over the lattice.
double weighted_norm(const LatticeSeq& c, const WeightSpec& y, LpExponent p);

LatticeSeq convolve(const LatticeSeq& a, const LatticeSeq& b);
LatticeSeq involute(const LatticeSeq& a);
double algebra_norm(const LatticeSeq& a, const AlgebraSpec& spec);

struct WeightCheck {
    bool ok = false;
    double worst_ratio = 0.0;  // smallest valid constant C
};

/// q = 1: smallest C with w(λ+μ) ≤ C w(λ) w(μ); q = ∞: smallest C with w⁻¹∗w⁻¹ ≤ C w⁻¹.
WeightCheck check_algebra_weight(const AlgebraSpec& spec);

/// ω(nλ)^{1/n} for n = 1..n_max on the unwrapped plane Z^2.
std::vector<double> grs_profile(const std::function<double(long, long)>& weight, long k, long l, long n_max);
std::vector<double> grs_profile(const WeightSpec& weight, long k, long l, long n_max);

struct MaximalityReport {
    double l1 = 0.0;
    double sup_f = 0.0;
    double rel_err = 0.0;
};

/// ‖a‖₁ against max over a uniform grid of |Σ |a(k)| e^{−2πikξ}| for a sequence supported on
/// first, first+1, ... on Z.
MaximalityReport l1_maximality_check(std::span<const cd> a, long first, long grid_m);

}  // namespace tfpsi
