#include "qfames/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfames {

MatrixXcd filtered_observable_matrix(const ObservableTensor& tensor, double theta) {
    if (tensor.data.empty()) throw std::invalid_argument("empty observable tensor");
    MatrixXcd g = MatrixXcd::Zero(tensor.left_count, tensor.right_count);
    const int n_samples = tensor.sample_count();
    for (int n = 0; n < n_samples; ++n) {
        const cxd ph = std::exp(cxd(0.0, theta * (tensor.times.times[n] - tensor.times_prime.times[n])));
        for (int l = 0; l < tensor.left_count; ++l)
            for (int r = 0; r < tensor.right_count; ++r)
                g(l, r) += tensor.at(l, r, n) * ph;
    }
    return g / static_cast<double>(n_samples);
}

ProjectedPair projected_pair(const ClusterEstimate& cluster, const MatrixXcd& g_obs) {
    if (cluster.multiplicity < 1)
        throw std::invalid_argument("cluster has multiplicity 0: no projection possible");
    if (cluster.svd_left.rows() != g_obs.rows() || cluster.svd_right.rows() != g_obs.cols())
        throw std::invalid_argument("projected_pair: dimension mismatch");
    const int m = cluster.multiplicity;
    ProjectedPair p;
    p.theta_star = cluster.theta_star;
    p.rank = m;
    p.g_tilde = cluster.singular_values.head(m).asDiagonal();
    p.g_tilde_obs = cluster.svd_left.leftCols(m).adjoint() * g_obs * cluster.svd_right.leftCols(m);
    return p;
}

ObservableSpectrum solve_generalized(const ProjectedPair& pair) {
    const int m = pair.rank;
    if (!pair.g_tilde_obs.allFinite() || !pair.g_tilde.allFinite())
        throw std::runtime_error("non-finite projected matrices");
    // g_tilde is diagonal with entries > tau > 0, so the pencil reduces to a
    // standard eigenproblem on g_tilde^{-1} g_tilde^O.
    MatrixXcd a = pair.g_tilde_obs;
    for (int i = 0; i < m; ++i) a.row(i) /= pair.g_tilde(i, i);
    Eigen::ComplexEigenSolver<MatrixXcd> es(a);
    if (es.info() != Eigen::Success) throw std::runtime_error("generalized eigensolve failed");

    std::vector<std::pair<double, double>> vals;  // (re, |im|)
    for (int i = 0; i < m; ++i)
        vals.emplace_back(es.eigenvalues()[i].real(), std::abs(es.eigenvalues()[i].imag()));
    std::sort(vals.begin(), vals.end());
    ObservableSpectrum out;
    out.eigenvalues.resize(m);
    out.residual_imag.resize(m);
    for (int i = 0; i < m; ++i) {
        out.eigenvalues[i] = vals[i].first;
        out.residual_imag[i] = vals[i].second;
        if (vals[i].second > 0.05) out.noisy = true;
    }
    out.range = {out.eigenvalues[0], out.eigenvalues[m - 1]};
    return out;
}

std::pair<double, double> observable_range(const ObservableSpectrum& spectrum) {
    if (spectrum.eigenvalues.size() == 0) throw std::invalid_argument("empty observable spectrum");
    return {spectrum.eigenvalues.minCoeff(), spectrum.eigenvalues.maxCoeff()};
}

}  // namespace qfames
