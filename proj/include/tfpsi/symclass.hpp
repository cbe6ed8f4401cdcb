#pragma once

// Symbol classes: grand symbol, amalgam norms, Sjöstrand-type and modulation-space norms.

#include <string>

#include "tfpsi/cdmat.hpp"
#include "tfpsi/weyl.hpp"

namespace tfpsi {

/// G(σ)(ζ) = max_z |V_Φσ(z, ζ)|, stored as an N×N real array indexed by ζ.
struct GrandSymbol {
    Eigen::MatrixXd values;
    std::string window_id;

    long n() const { return static_cast<long>(values.rows()); }
    double operator()(PhasePoint zeta) const {
        return values(mod(zeta.x, n()), mod(zeta.xi, n()));
    }
};

GrandSymbol grand_symbol(const Symbol& sigma, const Symbol& phi, std::string window_id = "custom");

/// a(λ) = max over ζ ∈ λ + box of F(ζ), box = {0..α−1} × {0..β−1}.
LatticeSeq local_suprema(const Eigen::MatrixXd& f, const PhaseLattice& lattice);
double amalgam_norm(const Eigen::MatrixXd& f, const PhaseLattice& lattice, const AlgebraSpec& spec);

/// F(ζ) = G(j(ζ)).
Eigen::MatrixXd rotate_grand(const GrandSymbol& g);

struct ClassNormReport {
    double sjostrand_norm = 0.0;
    Exponent q = Exponent::one;
    AlgebraSpec spec;
    bool member = false;  // sjostrand_norm ≤ threshold
};

/// ‖G(σ)∘j‖_{W(A)} with Φ = W(g,g)/N.
ClassNormReport sjostrand_norm(const Symbol& sigma, const Signal& g, const AlgebraSpec& spec,
                               double threshold = std::numeric_limits<double>::infinity());

/// M^{∞,q}_{1⊗v} norm with the periodized Gaussian window on Z_N².
double modspace_norm(const Symbol& sigma, Exponent q, const WeightSpec& weight);

struct WindowRatio {
    double ratio = 0.0;
    double norm1 = 0.0;
    double norm2 = 0.0;
};

WindowRatio window_independence_check(const Symbol& sigma, const Signal& g1, const Signal& g2, const AlgebraSpec& spec);

struct HormanderRow {
    double s = 0.0;
    double c_s = 0.0;  // smallest C with |⟨σ^w π(z)g, π(w)g⟩| ≤ C⟨w−z⟩^{−s}
};

struct HormanderReport {
    LatticeSeq envelope;  // e(ν) = max_{w−z=ν} |⟨σ^w π(z)g, π(w)g⟩| on the full lattice
    DecayFit fit;
    bool fit_ok = false;
    std::vector<HormanderRow> rows;
    double tail_max = 0.0;  // max of e beyond tail_radius
    double tail_radius = 6.0;
};

HormanderReport hormander_profile(const Symbol& sigma, const Signal& g, const std::vector<double>& s_list,
                                  double tail_radius = 6.0);

}  // namespace tfpsi
