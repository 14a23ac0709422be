#pragma once

#include "qfames/evolution.hpp"

#include <string>
#include <vector>

namespace qfames {

/// A family of normalized initial states {|phi_l>} (or {|psi_r>}).
struct StateSet {
    std::vector<VectorXcd> states;
    std::vector<std::string> labels;

    int count() const { return static_cast<int>(states.size()); }
    Eigen::Index dim() const { return states.empty() ? 0 : states.front().size(); }
    void validate() const;  // unit norms, common dimension
};

/// |phi_l> = sum_m conj(Phi_{l,m}) |E_m>, reproducing the given overlap matrix
/// exactly. Rows must have unit norm (tolerance 1e-8).
StateSet states_from_overlaps(const Spectrum& spectrum, const MatrixXcd& overlaps);

/// Normalized vectors of iid standard complex Gaussians (exact Haar measure).
StateSet haar_random_states(Eigen::Index dim, int count, std::uint64_t seed);

/// Haar states passed through exp(-beta H) and renormalized.
StateSet boosted_random_states(const PauliSumHamiltonian& h, const EvolutionBackend& backend,
                               double beta, int count, std::uint64_t seed);

/// Phi_{l,m} = <phi_l|E_m>, Psi_{r,m} = <psi_r|E_m>.
std::pair<MatrixXcd, MatrixXcd> overlap_matrices(const Spectrum& spectrum,
                                                 const StateSet& left, const StateSet& right);

/// Overlap scores and the sufficient-dominance / uniform-overlap diagnostics.
struct DominanceDiagnostics {
    VectorXd p_per_eigenvector;        // p_m = ||Phi_col|| * ||Psi_col||
    double p_min = 0.0;                // over the dominant set
    double p_tail = 0.0;               // over the complement
    double dominance_ratio = 0.0;      // p_min / p_tail (inf if p_tail = 0)
    bool dominance_satisfied = false;  // p_min >= C_p * p_tail
    std::vector<double> chi_per_cluster;  // minimal chi per cluster (inf = rank deficient)
    std::vector<std::vector<int>> clusters;
    bool rank_deficient = false;  // any cluster with s_min = 0 (no-go warning)
};

DominanceDiagnostics dominance_diagnostics(const MatrixXcd& phi, const MatrixXcd& psi,
                                           const std::vector<int>& dominant,
                                           const std::vector<std::vector<int>>& clusters,
                                           double c_p);

}  // namespace qfames
