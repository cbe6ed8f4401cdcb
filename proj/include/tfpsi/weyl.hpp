#pragma once

// Finite Weyl calculus on Z_N.

#include "tfpsi/phase.hpp"

namespace tfpsi {

class OperatorMatrix {
public:
    explicit OperatorMatrix(Eigen::MatrixXcd entries);

    static OperatorMatrix identity(long n);
    /// Rank one operator f ↦ ⟨f, g⟩ u.
    static OperatorMatrix outer(const Signal& u, const Signal& g);

    long n() const { return static_cast<long>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    Signal operator()(const Signal& f) const { return Signal(Eigen::VectorXcd(entries_ * f.values())); }
    OperatorMatrix adjoint() const { return OperatorMatrix(entries_.adjoint()); }

    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
        return OperatorMatrix(a.entries_ * b.entries_);
    }

private:
    Eigen::MatrixXcd entries_;
};

/// (σ^w f)(x) = (1/N) Σ_{y,ξ} σ(h(x+y), ξ) e^{2πi(x−y)ξ/N} f(y).
OperatorMatrix quantize(const Symbol& sigma);

/// Inverse of quantize: σ(u, ξ) = Σ_t T(u + ht, u − ht) e^{−2πitξ/N}.
Symbol dequantize(const OperatorMatrix& op);

Symbol twisted_product(const Symbol& sigma, const Symbol& tau);

/// Φ_g = W(g,g)/N. With this normalisation |⟨σ^w π(z)g, π(w)g⟩| = |V_{Φ_g}σ(h(w+z), j(w−z))|.
Symbol weyl_window(const Signal& g);

/// E(w, z) = ⟨σ^w π(z)g, π(w)g⟩ for all w, z ∈ Z_N², stored at (flat(w), flat(z)).
Eigen::MatrixXcd full_matrix_elements(const Symbol& sigma, const Signal& g);

struct CovarianceReport {
    double max_rel_err = 0.0;       // forward direction
    double readback_rel_err = 0.0;  // |V_Φσ(u, v)| read back from the matrix elements
    std::size_t pairs = 0;
};

CovarianceReport covariance_check(const Symbol& sigma, const Signal& g);

}  // namespace tfpsi
