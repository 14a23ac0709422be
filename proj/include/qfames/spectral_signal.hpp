#pragma once

#include "qfames/sampling.hpp"
#include "qfames/states.hpp"

namespace qfames {

/// Level-resolved representation of the cross-correlation signals:
///   Z_{l,r}(t) = sum_j e^{-i E_j t} M_j[l,r],   M_j = <phi_l| P_j |psi_r>
/// with P_j the spectral projector at energy E_j. Exact for both the dense
/// spectrum path (one rank-1 term per eigenvector) and the commuting
/// stabilizer path (one term per occupied level).
struct SpectralSignal {
    VectorXd energies;                      // ascending (normalized units)
    std::vector<MatrixXcd> level_overlaps;  // L x R per level
    MatrixXd left_level_weights;            // <phi_l|P_j|phi_l>, L x levels
    MatrixXd right_level_weights;           // <psi_r|P_j|psi_r>, R x levels
    double norm_scale = 1.0;

    int left_count() const { return level_overlaps.empty() ? 0 : static_cast<int>(level_overlaps[0].rows()); }
    int right_count() const { return level_overlaps.empty() ? 0 : static_cast<int>(level_overlaps[0].cols()); }
    int level_count() const { return static_cast<int>(energies.size()); }

    /// Z(t), L x R.
    MatrixXcd value(double t) const;

    /// Ideal-filter matrix sum_j exp(-(theta - E_j)^2 T^2) M_j  (the cited
    /// expectation of G(theta) under the untruncated Gaussian sampler).
    MatrixXcd gaussian_filter_matrix(double theta, double filter_width) const;

    /// Expectation of G(theta) under the realized truncated sampler.
    MatrixXcd truncated_filter_matrix(double theta, double filter_width, double truncation,
                                      TruncationMode mode) const;
};

/// Dense-spectrum construction: one level per eigenvector (rank-1 overlaps).
SpectralSignal spectral_signal_from_spectrum(const Spectrum& spectrum,
                                             const StateSet& left, const StateSet& right);

/// As above but directly from overlap matrices (columns indexed like spectrum).
SpectralSignal spectral_signal_from_overlaps(const VectorXd& eigenvalues,
                                             const MatrixXcd& phi, const MatrixXcd& psi,
                                             double norm_scale = 1.0);

/// Commuting equal-|coefficient| Pauli sums (stabilizer Hamiltonians): the
/// spectrum lives on the lattice {-s*K, ..., +s*K} with step 2s, so K+1
/// evolutions per right state and a unitary DFT recover every M_j exactly.
/// Levels with total weight below `prune` are dropped.
SpectralSignal spectral_signal_from_commuting(const PauliSumHamiltonian& h,
                                              const StateSet& left, const StateSet& right,
                                              double prune = 1e-12);

}  // namespace qfames
