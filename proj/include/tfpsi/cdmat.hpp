#pragma once

// Convolution-dominated matrices over a phase lattice.

#include <Eigen/Dense>

#include "tfpsi/seqalg.hpp"

namespace tfpsi {

/// Lattice-indexed matrix with its diagonal envelope d_A(μ) = max_λ |A_{λ,λ−μ}|.
/// The envelope is computed once at construction.
class CDMatrix {
public:
    CDMatrix(PhaseLattice lattice, Eigen::MatrixXcd entries);

    static CDMatrix identity(PhaseLattice lattice);
    /// A_{λμ} = a(λ − μ).
    static CDMatrix circulant(const LatticeSeq& a);

    const PhaseLattice& lattice() const { return lattice_; }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    const LatticeSeq& envelope() const { return envelope_; }
    std::size_t size() const { return lattice_.size(); }
    cd operator()(std::size_t i, std::size_t j) const { return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }

    CDMatrix adjoint() const { return CDMatrix(lattice_, entries_.adjoint()); }
    friend CDMatrix operator*(const CDMatrix& a, const CDMatrix& b);

private:
    PhaseLattice lattice_;
    Eigen::MatrixXcd entries_;
    LatticeSeq envelope_;
};

LatticeSeq envelope(const Eigen::MatrixXcd& entries, const PhaseLattice& lattice);
inline const LatticeSeq& envelope(const CDMatrix& a) { return a.envelope(); }

double cda_norm(const CDMatrix& a, const AlgebraSpec& spec);

struct ProductBoundReport {
    double max_violation = 0.0;  // max_μ d_{AB}(μ) − (d_A ∗ d_B)(μ)
    double scale = 0.0;          // max_μ (d_A ∗ d_B)(μ)
};

ProductBoundReport envelope_product_bound(const CDMatrix& a, const CDMatrix& b);

struct ApplyReport {
    double lhs = 0.0;               // ‖Ac‖
    double rhs = 0.0;               // C·‖A‖_{C_A}·‖c‖
    double algebra_constant = 1.0;  // C from check_algebra_weight
    bool ok = false;
};

/// Ac together with the check ‖Ac‖ ≤ C‖A‖‖c‖ in the norm of spec.
std::pair<LatticeSeq, ApplyReport> apply(const CDMatrix& a, const LatticeSeq& c, const AlgebraSpec& spec);

/// Moore-Penrose pseudo-inverse by SVD; singular values below rtol·σ_max are dropped.
Eigen::MatrixXcd pinv(const Eigen::MatrixXcd& a, double rtol = 1e-10);
CDMatrix pinv(const CDMatrix& a, double rtol = 1e-10);

struct DecayFit {
    double s_hat = 0.0;
    double c_hat = 0.0;
    double residual = 0.0;  // RMS of the log residuals
    std::size_t points_used = 0;
};

/// Least squares fit of log d(μ) ≈ log C − s·log⟨μ⟩ over |μ| ≥ min_dist, d(μ) > 1e−300.
DecayFit decay_fit(const LatticeSeq& d, double min_dist = 2.0);

struct FourierReport {
    double max_err = 0.0;
    long samples = 0;
};

/// Samples f(t) = M_t A M_{−t} on a t_samples × t_samples grid of the torus, recovers the
/// Fourier coefficients by the discrete transform and compares them with the side diagonals.
FourierReport diagonal_fourier_check(const CDMatrix& a, long t_samples);

/// A = I + K with |K_{λμ}| = strength·⟨λ−μ⟩^{−s}·U(0.5, 1) and random unimodular phases.
CDMatrix synthetic_jaffard(const PhaseLattice& lattice, double s, std::uint64_t seed, double strength = 0.1);

}  // namespace tfpsi
