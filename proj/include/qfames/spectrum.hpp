#pragma once

#include "qfames/pauli.hpp"

namespace qfames {

/// Exact eigendecomposition, ascending eigenvalues; the ground-truth oracle.
struct Spectrum {
    VectorXd eigenvalues;    // normalized units (norm_scale already applied)
    MatrixXcd eigenvectors;  // unitary, columns |E_m>
    double norm_scale = 1.0;

    Eigen::Index size() const { return eigenvalues.size(); }
    /// Physical (unnormalized) eigenvalue for index m.
    double physical(Eigen::Index m) const { return eigenvalues[m] / norm_scale; }
};

/// Dense path; throws for dim > 2^13.
Spectrum eigendecompose(const PauliSumHamiltonian& h);

/// Lanczos extremal-subspace mode: lowest `count` distinct-ish levels of a large
/// sparse H (full reorthogonalization; degenerate copies are not resolved).
struct LanczosExtremal {
    VectorXd eigenvalues;    // lowest few Ritz values, ascending
    MatrixXcd eigenvectors;  // Ritz vectors, columns
};
LanczosExtremal lanczos_lowest(const PauliSumHamiltonian& h, int count,
                               int max_iterations = 120, std::uint64_t seed = 1);

}  // namespace qfames
