#pragma once

// Time-frequency analysis on Z_N: shifts, STFTs, Wigner distribution, Gabor frames.

#include <Eigen/Dense>

#include "tfpsi/seqalg.hpp"

namespace tfpsi {

/// Complex vector on Z_N, N odd. Inner product is linear in the first slot, no 1/N.
class Signal {
public:
    explicit Signal(long n);
    explicit Signal(Eigen::VectorXcd values);

    static Signal delta(long n, long at = 0);

    long n() const { return static_cast<long>(values_.size()); }
    cd operator[](long t) const { return values_(mod(t, n())); }
    cd& operator[](long t) { return values_(mod(t, n())); }
    const Eigen::VectorXcd& values() const { return values_; }
    double norm() const { return values_.norm(); }

private:
    Eigen::VectorXcd values_;
};

cd inner(const Signal& f, const Signal& g);

/// Complex array on Z_N × Z_N indexed (x, ξ).
class Symbol {
public:
    explicit Symbol(long n);
    explicit Symbol(Eigen::MatrixXcd values);

    static Symbol constant(long n, cd c);

    long n() const { return static_cast<long>(values_.rows()); }
    cd operator()(long x, long xi) const { return values_(mod(x, n()), mod(xi, n())); }
    cd& operator()(long x, long xi) { return values_(mod(x, n()), mod(xi, n())); }
    cd operator()(PhasePoint z) const { return (*this)(z.x, z.xi); }
    const Eigen::MatrixXcd& values() const { return values_; }
    Eigen::MatrixXcd& values() { return values_; }
    double norm() const { return values_.norm(); }

    Symbol& operator*=(cd c) {
        values_ *= c;
        return *this;
    }

private:
    Eigen::MatrixXcd values_;
};

Signal tf_shift(PhasePoint z, const Signal& f);

/// V_g f(x, ξ) = Σ_t f(t) conj(g(t−x)) e^{−2πitξ/N}, rows x, columns ξ.
Eigen::MatrixXcd stft(const Signal& f, const Signal& g);

/// V_Φσ on (Z_N²)²; value at (z, ζ) stored at ((z1·N + z2)·N + ζ1)·N + ζ2.
class SymbolStft {
public:
    SymbolStft(long n, std::vector<cd> data) : n_(n), data_(std::move(data)) {}

    long n() const { return n_; }
    cd operator()(PhasePoint z, PhasePoint zeta) const { return data_[offset(z, zeta)]; }
    const std::vector<cd>& data() const { return data_; }
    std::size_t offset(PhasePoint z, PhasePoint zeta) const {
        const auto n = static_cast<std::size_t>(n_);
        return ((static_cast<std::size_t>(mod(z.x, n_)) * n + static_cast<std::size_t>(mod(z.xi, n_))) * n +
                static_cast<std::size_t>(mod(zeta.x, n_))) * n + static_cast<std::size_t>(mod(zeta.xi, n_));
    }

private:
    long n_;
    std::vector<cd> data_;
};

SymbolStft stft2(const Symbol& sigma, const Symbol& phi);

/// Calls visit(z, block) for every z, where block(ζ1, ζ2) = V_Φσ(z, ζ). Runs in parallel over z;
/// visit must only write to slots owned by z.
void stft2_visit(const Symbol& sigma, const Symbol& phi,
                 const std::function<void(PhasePoint, const Eigen::MatrixXcd&)>& visit);

/// W(f,g)(x, ξ) = Σ_t f(x + ht) conj(g(x − ht)) e^{−2πitξ/N}, h = 2⁻¹ mod N.
Symbol wigner(const Signal& f, const Signal& g);

/// S = Σ_λ outer(π(λ)g).
Eigen::MatrixXcd frame_operator(const Signal& g, const PhaseLattice& lattice);

/// Columns π(λ)g in lattice order.
Eigen::MatrixXcd atom_matrix(const Signal& g, const PhaseLattice& lattice);

class GaborSystem {
public:
    GaborSystem(Signal window, PhaseLattice lattice);

    const Signal& window() const { return window_; }
    const PhaseLattice& lattice() const { return lattice_; }
    const Eigen::MatrixXcd& frame_operator() const { return frame_; }
    const Eigen::MatrixXcd& atoms() const { return atoms_; }
    bool tight() const { return tight_; }
    double tightness_error() const { return tight_err_; }  // max |S − I|
    long n() const { return window_.n(); }

    /// Orthogonal projection onto the range of the analysis map (tight systems).
    Eigen::MatrixXcd range_projection() const { return atoms_.adjoint() * atoms_; }

private:
    Signal window_;
    PhaseLattice lattice_;
    Eigen::MatrixXcd atoms_;
    Eigen::MatrixXcd frame_;
    double tight_err_ = 0.0;
    bool tight_ = false;
};

/// Canonical tight window S^{−1/2}g.
GaborSystem tighten(const Signal& g, const PhaseLattice& lattice);

LatticeSeq analysis(const GaborSystem& sys, const Signal& f);
Signal synthesis(const GaborSystem& sys, const LatticeSeq& c);

/// g(t) = Σ_{|m|≤5} e^{−π((t + mN)/√N)²}.
Signal periodized_gaussian(long n);
/// p(x)p(ξ) with p(t) = Σ_{|m|≤5} e^{−π(t + mN)²/(2N)}, the analogue of e^{−π z·z/2}.
Symbol periodized_gaussian_2d(long n);

struct MagicReport {
    double max_rel_err = 0.0;
    double scale = 0.0;
};

/// |V_{W(φ,φ)}W(g,g)(z, ζ)| against N·|V_φg(z + h·j(ζ))|·|V_φg(z − h·j(ζ))| over all (z, ζ).
MagicReport magic_formula_check(const Signal& g, const Signal& phi);
MagicReport magic_formula_check(const Signal& g);

}  // namespace tfpsi
