#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace qfames {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// One weighted Pauli string. Letters over {I,X,Y,Z}, one per qubit, qubit 0
/// is the least significant bit of the basis-state index.
struct PauliTerm {
    double coefficient = 0.0;
    std::string letters;
};

/// Do two Pauli strings commute? (Shared-support anticommutation count even.)
bool terms_commute(const PauliTerm& a, const PauliTerm& b);

/// Hermitian operator as a weighted sum of Pauli strings, or an explicit dense
/// matrix for small non-Pauli systems (the 3x3 illustrative Hamiltonian).
struct PauliSumHamiltonian {
    int n_qubits = 0;
    std::vector<PauliTerm> terms;
    bool all_commuting = false;
    double norm_scale = 1.0;               // factor applied by normalize_spectrum
    std::optional<MatrixXcd> dense_matrix; // used when terms is empty

    Eigen::Index dim() const {
        return dense_matrix ? dense_matrix->rows() : (Eigen::Index{1} << n_qubits);
    }
    bool is_dense() const { return dense_matrix.has_value(); }

    /// Sum of |coefficients| (dense: spectral norm); bounds the spectral radius.
    double coefficient_bound() const;

    /// out = H * in (sparse Pauli matvec or dense product).
    void apply(const VectorXcd& in, VectorXcd& out) const;

    /// Explicit matrix; throws for dim > 2^13.
    MatrixXcd to_dense() const;

    void validate() const;  // Hermiticity/shape invariants
};

/// Dense-statevector action of a single Pauli string (coefficient ignored).
void apply_pauli_string(const PauliTerm& term, const VectorXcd& in, VectorXcd& out);

/// In-place exp(-i * angle * P) * v for a Pauli string P (unit coefficient):
/// v <- cos(angle) v - i sin(angle) P v, fused over (index, index^mask) pairs.
void apply_pauli_rotation(const PauliTerm& term, double angle, VectorXcd& v);

/// In-place exp(w * P) * v for real w: v <- cosh(w) v + sinh(w) P v.
void apply_pauli_imaginary(const PauliTerm& term, double w, VectorXcd& v);

struct IllustrativeModel {
    PauliSumHamiltonian hamiltonian;  // dense diag(0, 0, 0.1)
    MatrixXcd overlaps;               // 3x3 Phi = Psi
};

/// The 3x3 example: eigenvalues {0, 0, 0.1}, Phi = (1/sqrt3)[[1,1,1],[1,-1,1],[1,1,-1]].
IllustrativeModel build_illustrative();

/// Open-boundary transverse-field Ising chain: -sum Z_i Z_{i+1} - g sum X_i.
PauliSumHamiltonian build_tfim(int sites, double coupling);

enum class ToricBoundary { torus, cylinder };

/// Toric code on a 2D lattice, qubits on edges: H = -sum_v A_v - sum_p B_p.
/// Supported sizes follow the 2x4 study (torus: 16 qubits, cylinder: 18).
PauliSumHamiltonian build_toric(int rows, int cols, ToricBoundary boundary);

/// Scale so the spectrum fits in [-0.9pi, 0.9pi]; no-op when the coefficient
/// bound is already below 0.9pi (or zero). norm_scale records the factor.
PauliSumHamiltonian normalize_spectrum(const PauliSumHamiltonian& h);

}  // namespace qfames
