#include "qfames/states.hpp"

#include "qfames/parallel.hpp"
#include "qfames/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qfames {

void StateSet::validate() const {
    const Eigen::Index d = dim();
    for (const auto& s : states) {
        if (s.size() != d) throw std::invalid_argument("states must share a dimension");
        if (std::abs(s.norm() - 1.0) > 1e-10)
            throw std::invalid_argument("states must be normalized");
    }
}

StateSet states_from_overlaps(const Spectrum& spectrum, const MatrixXcd& overlaps) {
    if (overlaps.cols() != spectrum.size())
        throw std::invalid_argument("overlap matrix columns must match spectrum dimension");
    StateSet set;
    for (Eigen::Index l = 0; l < overlaps.rows(); ++l) {
        const double rn = overlaps.row(l).norm();
        if (std::abs(rn - 1.0) > 1e-8)
            throw std::invalid_argument("overlap row " + std::to_string(l) +
                                        " is not unit norm; state not normalizable as specified");
        set.states.push_back(spectrum.eigenvectors * overlaps.row(l).adjoint());
        set.labels.push_back("overlap-specified " + std::to_string(l));
    }
    return set;
}

StateSet haar_random_states(Eigen::Index dim, int count, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("state dimension must be positive");
    StateSet set;
    set.states.resize(count);
    set.labels.resize(count);
    parallel_for(count, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            VectorXcd v(dim);
            for (Eigen::Index j = 0; j < dim; ++j) {
                auto [a, b] = rng::gaussian_pair(rng::key(
                    {seed, 0x4aa2u, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)}));
                v[j] = cxd(a, b);
            }
            set.states[i] = v.normalized();
            set.labels[i] = "haar seed=" + std::to_string(seed) + " index=" + std::to_string(i);
        }
    });
    return set;
}

StateSet boosted_random_states(const PauliSumHamiltonian& h, const EvolutionBackend& backend,
                               double beta, int count, std::uint64_t seed) {
    StateSet set = haar_random_states(h.dim(), count, seed);
    parallel_for(count, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            set.states[i] = imaginary_evolve(h, backend, set.states[i], beta).state;
            set.labels[i] += " boosted beta=" + std::to_string(beta);
        }
    });
    return set;
}

std::pair<MatrixXcd, MatrixXcd> overlap_matrices(const Spectrum& spectrum,
                                                 const StateSet& left, const StateSet& right) {
    if (left.dim() != spectrum.eigenvectors.rows() || right.dim() != spectrum.eigenvectors.rows())
        throw std::invalid_argument("state dimension does not match spectrum");
    MatrixXcd phi(left.count(), spectrum.size());
    MatrixXcd psi(right.count(), spectrum.size());
    for (int l = 0; l < left.count(); ++l)
        phi.row(l) = left.states[l].adjoint() * spectrum.eigenvectors;
    for (int r = 0; r < right.count(); ++r)
        psi.row(r) = right.states[r].adjoint() * spectrum.eigenvectors;
    return {phi, psi};
}

namespace {

// minimal chi for one overlap block: s_min > s_avg / (1 + chi)  <=>  chi >= s_avg/s_min - 1
double minimal_chi(const MatrixXcd& block) {
    Eigen::JacobiSVD<MatrixXcd> svd(block);
    const auto& sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    const double savg = block.norm() / std::sqrt(static_cast<double>(block.cols()));
    if (block.rows() < block.cols() || smin <= 1e-14 * std::max(1.0, sv[0]))
        return std::numeric_limits<double>::infinity();
    return std::max(0.0, savg / smin - 1.0);
}

}  // namespace

DominanceDiagnostics dominance_diagnostics(const MatrixXcd& phi, const MatrixXcd& psi,
                                           const std::vector<int>& dominant,
                                           const std::vector<std::vector<int>>& clusters,
                                           double c_p) {
    if (phi.cols() != psi.cols()) throw std::invalid_argument("overlap matrices disagree on M");
    if (dominant.empty()) throw std::invalid_argument("dominant set must be nonempty");
    const Eigen::Index m_total = phi.cols();
    DominanceDiagnostics d;
    d.p_per_eigenvector.resize(m_total);
    for (Eigen::Index m = 0; m < m_total; ++m)
        d.p_per_eigenvector[m] = phi.col(m).norm() * psi.col(m).norm();

    std::vector<bool> in_dom(m_total, false);
    for (int m : dominant) {
        if (m < 0 || m >= m_total) throw std::invalid_argument("dominant index out of range");
        in_dom[m] = true;
    }
    d.p_min = std::numeric_limits<double>::infinity();
    d.p_tail = 0.0;
    for (Eigen::Index m = 0; m < m_total; ++m) {
        if (in_dom[m]) d.p_min = std::min(d.p_min, d.p_per_eigenvector[m]);
        else d.p_tail += d.p_per_eigenvector[m];
    }
    d.dominance_ratio = d.p_tail == 0.0 ? std::numeric_limits<double>::infinity()
                                        : d.p_min / d.p_tail;
    d.dominance_satisfied = d.p_min >= c_p * d.p_tail;

    d.clusters = clusters;
    for (const auto& cluster : clusters) {
        MatrixXcd bp(phi.rows(), cluster.size()), bq(psi.rows(), cluster.size());
        for (std::size_t j = 0; j < cluster.size(); ++j) {
            bp.col(j) = phi.col(cluster[j]);
            bq.col(j) = psi.col(cluster[j]);
        }
        const double chi = std::max(minimal_chi(bp), minimal_chi(bq));
        if (std::isinf(chi)) d.rank_deficient = true;
        d.chi_per_cluster.push_back(chi);
    }
    return d;
}

}  // namespace qfames
