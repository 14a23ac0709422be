#pragma once

#include "qfames/core.hpp"

#include <optional>

namespace qfames {

struct GroundTruthCluster {
    double center = 0.0;                // midpoint of the member interval
    std::vector<double> members;        // eigenvalues, ascending
    std::vector<int> member_indices;    // indices into the spectrum
    int multiplicity() const { return static_cast<int>(members.size()); }
    double width() const { return members.empty() ? 0.0 : members.back() - members.front(); }
};

struct GroundTruth {
    std::vector<GroundTruthCluster> clusters;  // ascending by center
    std::vector<int> dominant;                 // the index set D
    double realized_separation = 0.0;          // min inter-cluster interval distance
    double realized_width = 0.0;               // max cluster width
    double p_tail = 0.0;
    bool dominance_found = true;               // false when no D satisfies the condition

    std::vector<WeightedAtom> atoms() const;   // DODS as an atomic measure
};

/// Oracle: all p_m from (Phi, Psi), maximal dominant prefix satisfying
/// p_min >= C_p p_tail, then single-linkage clustering with gap threshold
/// `separation`; widths checked against `width`.
GroundTruth brute_force_dods(const Spectrum& spectrum, const MatrixXcd& phi, const MatrixXcd& psi,
                             double c_p, double separation, double width);

/// GF(2) rank of the stabilizer group generated by the (commuting, +-1 coeff)
/// terms; ground degeneracy is 2^(n - rank).
int stabilizer_rank(const PauliSumHamiltonian& h);
std::int64_t stabilizer_ground_degeneracy(const PauliSumHamiltonian& h);

/// Single-initial-state baseline: the scalar |G(theta)| landscape of one
/// (l, r) pair, same search-and-block, no multiplicity stage.
std::vector<double> qmegs_run(const SignalTensor& tensor, const QfamesConfig& config,
                              LandscapeMethod method = LandscapeMethod::automatic);

/// The indistinguishability construction: for rank-deficient Phi (columns over
/// a degenerate subspace, unit rows), produce (Phi~, Psi~) with one fewer-rank
/// column block plus a padding column, satisfying Phi~ Psi~^dag = Phi Psi^dag.
/// Returns nothing for full-rank input (construction refused).
struct NogoConstruction {
    MatrixXcd phi_alt;
    MatrixXcd psi_alt;
    int alternative_multiplicity = 0;  // k = rank(Phi)
};
std::optional<NogoConstruction> nogo_construct(const MatrixXcd& phi, const MatrixXcd& psi);

/// max_i |theta*_i - lambda*_i| under sorted matching; count mismatch -> inf.
double error_metric(std::vector<double> estimated, std::vector<double> truth);

}  // namespace qfames
