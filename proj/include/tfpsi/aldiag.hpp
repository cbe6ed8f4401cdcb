#pragma once

// Gabor matrices of Weyl operators and the almost-diagonalization checks.

#include <string>

#include "tfpsi/symclass.hpp"

namespace tfpsi {

/// M(σ)_{λμ} = ⟨σ^w π(μ)g, π(λ)g⟩ over a tight Gabor system.
struct GaborMatrix {
    CDMatrix matrix;
    std::string system_id;
    std::string symbol_id;
    double diagram_residual = 0.0;  // max relative ‖analysis(σ^w f) − M·analysis(f)‖ over the probe signals
};

std::string system_id(const GaborSystem& sys);

GaborMatrix gabor_matrix(const Symbol& sigma, const GaborSystem& sys, std::string symbol_id = "symbol",
                         std::uint64_t probe_seed = 0);

inline const LatticeSeq& envelope_h(const GaborMatrix& m) { return m.matrix.envelope(); }

/// α(ν) = max_{ζ ∈ box} |V_gg(ν + ζ)|.
LatticeSeq alpha_sequence(const GaborSystem& sys);
/// β(ν) = max_{ζ ∈ box} χ_{box−box}(ζ + ν).
LatticeSeq beta_sequence(const PhaseLattice& lattice);

/// H(ζ) = Σ_ν (h∗α∗α*)(ν) χ_{box−box}(ζ − ν) on Z_N².
Eigen::MatrixXd dominating_H(const LatticeSeq& h, const GaborSystem& sys);

struct DominationBound {
    double h_amalgam = 0.0;      // ‖H‖_{W(A)}
    double middle = 0.0;         // ‖h∗α∗α*∗β‖_A
    double constant = 0.0;       // ‖α∗α*∗β‖_A
    double algebra_constant = 1.0;
    double h_norm = 0.0;         // ‖h‖_A
    double rhs = 0.0;            // algebra_constant·constant·h_norm
    bool ok = false;
};

DominationBound domination_bound(const LatticeSeq& h, const GaborSystem& sys, const AlgebraSpec& spec);

struct ChainReport {
    double pointwise_violation = 0.0;  // max |E(w,z)| − G(σ)(j(w−z)), relative to max G
    double envelope_violation = 0.0;   // max h(ν) − max_{ζ∈ν+box} G(σ)(j(ζ)), relative
    double domination_violation = 0.0; // max |E(w,z)| − H(w−z), relative to max H
    DominationBound bound;
};

ChainReport aldiag_chain(const Symbol& sigma, const GaborSystem& sys, const AlgebraSpec& spec);

struct NormEquivalence {
    double matrix_norm = 0.0;
    double symbol_norm = 0.0;
    double c_lower = 0.0;
    bool upper_ok = false;
};

NormEquivalence norm_equivalence_check(const Symbol& sigma, const GaborSystem& sys, const AlgebraSpec& spec);

struct StructureReport {
    double kernel_leak = 0.0;  // max ‖M P⊥c‖/‖c‖
    double range_leak = 0.0;   // max ‖P⊥ M P c‖/‖c‖
};

StructureReport matrix_structure_check(const GaborMatrix& m, const GaborSystem& sys, std::uint64_t seed,
                                       int samples = 10);

struct AlgebraIdentityReport {
    double max_err_on_range = 0.0;       // ‖(M(σ♯τ) − M(σ)M(τ))c‖/‖c‖
    double max_err_on_complement = 0.0;  // both products on (range)⊥
    double product_norm = 0.0;           // ‖M(σ♯τ)‖_{C_A}
    double factor_norm_bound = 0.0;      // C·‖M(σ)‖‖M(τ)‖
    double c_lower = 0.0;                // ‖M(σ♯τ)‖/‖σ♯τ‖
    double twisted_norm = 0.0;           // ‖σ♯τ‖
    double twisted_bound = 0.0;          // (C/c)·‖σ‖‖τ‖
    bool chain_ok = false;
};

AlgebraIdentityReport algebra_identity_check(const Symbol& sigma, const Symbol& tau, const GaborSystem& sys,
                                             const AlgebraSpec& spec, std::uint64_t seed, int samples = 10);

/// Constant C with ‖d∗|c|‖_{ℓ^p_y} ≤ C‖d‖_A‖c‖_{ℓ^p_y}, from m(ν) = max_λ y(λ+ν)/y(λ).
double action_constant(const AlgebraSpec& spec, const WeightSpec& y);

struct BoundednessReport {
    double action_constant = 0.0;
    double cda_norm = 0.0;
    double max_ratio = 0.0;  // max ‖M c‖ / (C‖M‖‖c‖)
    bool ok = false;
};

BoundednessReport boundedness_check(const Symbol& sigma, const GaborSystem& sys, const AlgebraSpec& spec,
                                    const WeightSpec& y, LpExponent p, std::uint64_t seed, int samples = 10);

struct InversionReport {
    double pinv_match_frob = 0.0;
    double condition_ratio = 0.0;  // σ_min/σ_max of σ^w
    DecayFit fit_sigma;
    DecayFit fit_tau;
    bool fits_ok = false;
};

std::pair<Symbol, InversionReport> invert_symbol(const Symbol& sigma, const GaborSystem& sys, double rtol = 1e-8);

struct SpectralReport {
    double max_residual = 0.0;  // max ‖analysis(τ^wσ^w f − f)‖/‖analysis(f)‖
    double tau_cda_norm = 0.0;
};

SpectralReport spectral_invariance_experiment(const Symbol& sigma, const GaborSystem& sys, const AlgebraSpec& spec,
                                              LpExponent p, const WeightSpec& y, std::uint64_t seed,
                                              double rtol = 1e-8, int samples = 10);

/// Random complex normal signal.
Signal random_signal(long n, std::uint64_t seed, std::uint64_t stream);

}  // namespace tfpsi
