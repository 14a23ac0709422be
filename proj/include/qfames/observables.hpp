#pragma once

#include "qfames/core.hpp"

namespace qfames {

/// G^O(theta) = (1/N) sum_n Z^O_{l,r,n} e^{i theta t_n} e^{-i theta t'_n}.
MatrixXcd filtered_observable_matrix(const ObservableTensor& tensor, double theta);

/// G and G^O restricted to the retained singular-vector subspace of a cluster.
struct ProjectedPair {
    MatrixXcd g_tilde;      // (Sigma)_[m], diagonal by construction
    MatrixXcd g_tilde_obs;  // U^dag G^O V restricted
    double theta_star = 0.0;
    int rank = 0;
};

ProjectedPair projected_pair(const ClusterEstimate& cluster, const MatrixXcd& g_obs);

/// Eigenvalues of the projected observable within a cluster.
struct ObservableSpectrum {
    VectorXd eigenvalues;     // real parts, ascending
    VectorXd residual_imag;   // |Im| per eigenvalue (noise indicator)
    std::pair<double, double> range{0.0, 0.0};
    bool noisy = false;       // any residual imaginary part above 0.05
};

/// Solve G~^O w = lambda^O G~ w via the diagonal-positive G~.
ObservableSpectrum solve_generalized(const ProjectedPair& pair);

std::pair<double, double> observable_range(const ObservableSpectrum& spectrum);

}  // namespace qfames
