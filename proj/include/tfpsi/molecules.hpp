#pragma once

// Time-frequency molecules, bell functions and periodized local sine bases.

#include <vector>

#include "tfpsi/aldiag.hpp"

namespace tfpsi {

struct BellSpec {
    double alpha = 1.0;
    double epsilon = 0.25;
    int smoothness = 3;
    double grid_step = 4.0 / 2048.0;

    /// Bump ζ(t) = c·(1 − (t/ε)²)^n on [−ε, ε] with ∫ζ = π/2.
    double zeta(double t) const;
    /// θ(t) = ∫_{−∞}^t ζ, in closed form.
    double theta(double t) const;
    /// b(t) = sin θ(t) · cos θ(t − α), not periodized.
    double bell(double t) const;

    void validate() const;
};

/// Samples on the grid t_j = j·step, j = 0..M−1, of one period P = M·step.
struct SampledFunction {
    double period = 0.0;
    double step = 0.0;
    std::vector<cd> samples;

    std::size_t size() const { return samples.size(); }
    double t(std::size_t j) const { return static_cast<double>(j) * step; }
};

/// Quadrature inner product step·Σ u conj(v).
cd inner(const SampledFunction& u, const SampledFunction& v);

/// Grid size M = P/step, checked to be an integer.
std::size_t grid_points(const BellSpec& spec, long bells);

/// b periodized over P = α·bells.
SampledFunction bell(const BellSpec& spec, long bells = 4);

struct SineIndex {
    long k = 0;
    long l = 0;
};

/// ψ_{k,l}(t) = √(2/α) b(t−αk) sin((2l+1)π(t−αk)/(2α)), periodized over P = αK.
std::vector<SampledFunction> local_sine_basis(const BellSpec& spec, long bells, long l_max,
                                              std::vector<SineIndex>* index = nullptr);
SampledFunction local_sine(const BellSpec& spec, long bells, long k, long l);

struct KompostReport {
    double max_point_err = 0.0;
};

/// Compares ψ_{k,l} with ((−1)^{kl}/(2i))√(2/α)(π(αk, l/(2α))b₊ − π(αk, −l/(2α))b₋) on the grid.
KompostReport kompost_decompose(const BellSpec& spec, long bells, long k, long l);

/// Family {e_μ} indexed by a Gabor lattice with |⟨e_μ, π(λ)g⟩| ≤ a(λ−μ).
struct MoleculeFamily {
    std::vector<Signal> members;
    LatticeSeq bound;        // a, the smallest such sequence for the reference system
    std::string system_id;
    double decay_constant = 0.0;  // measured C with |V_g φ_μ(z)| ≤ C⟨z⟩^{−s}
    double shifted_constant = 0.0;  // measured C'' with |⟨e_μ, π(λ)g⟩| ≤ C''⟨λ−μ⟩^{−s}
    double s = 0.0;
};

/// Envelope of the coefficients of members against sys, a(ν) = max_{λ−μ=ν} |⟨e_μ, π(λ)g⟩|.
LatticeSeq molecule_bound(const std::vector<Signal>& members, const GaborSystem& sys);
MoleculeFamily family_from_members(std::vector<Signal> members, const GaborSystem& sys, double s = 0.0);

MoleculeFamily make_molecules(const GaborSystem& sys, double jitter_bound, double s, std::uint64_t seed);

struct MoleculeDiagReport {
    LatticeSeq h_tilde;
    double max_violation = 0.0;  // max |⟨σ^w f_μ, e_λ⟩| − h̃(λ−μ), relative to max h̃
    bool ok = false;
};

/// famE supplies e_λ and its bound a, famF supplies f_μ and a'; h̃ = a'∗a*∗h.
MoleculeDiagReport molecule_almost_diag(const Symbol& sigma, const GaborSystem& sys, const MoleculeFamily& fam_e,
                                        const MoleculeFamily& fam_f, const AlgebraSpec& spec);

/// σ(t, ω) = Σ c·e^{2πi(a t/P + n·step·ω)}: trigonometric in t with period P and in ω with period 1/step.
struct TrigSymbol {
    struct Term {
        cd c;
        long a = 0;
        long n = 0;
    };
    std::vector<Term> terms;

    static TrigSymbol constant(cd c) { return {{{c, 0, 0}}}; }
    /// cos(2π·harmonic·t/P)
    static TrigSymbol cosine(long harmonic) { return {{{0.5, harmonic, 0}, {0.5, -harmonic, 0}}}; }

    cd operator()(double t, double omega, double period, double step) const;
    long max_shift() const;
};

/// Quadrature kernel of σ^w on the periodic grid: (σ^w f)(x_j) = Σ_{|r|≤reach} K(j, r) f(x_{j+r}),
/// column r + reach of values.
struct WeylKernel {
    long reach = 0;
    Eigen::MatrixXcd values;
};

WeylKernel weyl_kernel(const TrigSymbol& sigma, double period, double step, std::size_t m);
SampledFunction weyl_apply(const WeylKernel& kernel, const SampledFunction& f);
SampledFunction weyl_apply(const TrigSymbol& sigma, const SampledFunction& f);

struct SineBasisRow {
    double s = 0.0;
    double c_s = 0.0;
};

struct SineBasisReport {
    Eigen::MatrixXcd matrix;  // ⟨σ^w ψ_{k',l'}, ψ_{k,l}⟩, rows (k,l), columns (k',l')
    std::vector<SineIndex> index;
    std::vector<SineBasisRow> rows;
    double symmetry_defect = 0.0;  // max |M − Mᵀ| relative to max |M|
};

SineBasisReport sine_basis_almost_diag(const TrigSymbol& sigma, const BellSpec& spec, long bells, long l_max,
                                       const std::vector<double>& s_list);

}  // namespace tfpsi
