#include "qfames/spectral_signal.hpp"

#include "qfames/parallel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfames {

MatrixXcd SpectralSignal::value(double t) const {
    MatrixXcd z = MatrixXcd::Zero(left_count(), right_count());
    for (int j = 0; j < level_count(); ++j)
        z += std::exp(cxd(0.0, -energies[j] * t)) * level_overlaps[j];
    return z;
}

MatrixXcd SpectralSignal::gaussian_filter_matrix(double theta, double filter_width) const {
    MatrixXcd g = MatrixXcd::Zero(left_count(), right_count());
    for (int j = 0; j < level_count(); ++j) {
        const double x = (theta - energies[j]) * filter_width;
        g += std::exp(-x * x) * level_overlaps[j];
    }
    return g;
}

MatrixXcd SpectralSignal::truncated_filter_matrix(double theta, double filter_width,
                                                  double truncation, TruncationMode mode) const {
    MatrixXcd g = MatrixXcd::Zero(left_count(), right_count());
    for (int j = 0; j < level_count(); ++j)
        g += truncated_gaussian_fourier(theta - energies[j], filter_width, truncation, mode) *
             level_overlaps[j];
    return g;
}

SpectralSignal spectral_signal_from_overlaps(const VectorXd& eigenvalues,
                                             const MatrixXcd& phi, const MatrixXcd& psi,
                                             double norm_scale) {
    if (phi.cols() != eigenvalues.size() || psi.cols() != eigenvalues.size())
        throw std::invalid_argument("overlap matrices must have one column per eigenvalue");
    SpectralSignal sig;
    sig.energies = eigenvalues;
    sig.norm_scale = norm_scale;
    sig.level_overlaps.reserve(eigenvalues.size());
    sig.left_level_weights.resize(phi.rows(), eigenvalues.size());
    sig.right_level_weights.resize(psi.rows(), eigenvalues.size());
    for (Eigen::Index m = 0; m < eigenvalues.size(); ++m) {
        sig.level_overlaps.push_back(phi.col(m) * psi.col(m).adjoint());
        sig.left_level_weights.col(m) = phi.col(m).cwiseAbs2();
        sig.right_level_weights.col(m) = psi.col(m).cwiseAbs2();
    }
    return sig;
}

SpectralSignal spectral_signal_from_spectrum(const Spectrum& spectrum,
                                             const StateSet& left, const StateSet& right) {
    auto [phi, psi] = overlap_matrices(spectrum, left, right);
    return spectral_signal_from_overlaps(spectrum.eigenvalues, phi, psi, spectrum.norm_scale);
}

SpectralSignal spectral_signal_from_commuting(const PauliSumHamiltonian& h,
                                              const StateSet& left, const StateSet& right,
                                              double prune) {
    if (!h.all_commuting)
        throw std::invalid_argument("level extraction requires a commuting Hamiltonian");
    if (h.terms.empty()) throw std::invalid_argument("empty Hamiltonian");
    const double s = std::abs(h.terms.front().coefficient);
    for (const auto& t : h.terms)
        if (std::abs(std::abs(t.coefficient) - s) > 1e-12 * std::max(1.0, s))
            throw std::invalid_argument("level extraction requires equal-magnitude coefficients");

    const int terms = static_cast<int>(h.terms.size());
    const int levels = terms + 1;  // lattice -sK, -sK+2s, ..., +sK
    const int nl = left.count(), nr = right.count();
    const EvolutionBackend backend = make_commuting_backend(h);

    // S_k[l,r] = <phi_l| e^{-i H t_k} |psi_r> at t_k = pi k / (s * levels):
    // e^{-i E_m t_k} = e^{i s K t_k} e^{-2pi i m k / levels}, an invertible DFT.
    const bool same_family = (&left == &right);
    std::vector<MatrixXcd> snapshots(levels, MatrixXcd::Zero(nl, nr));
    std::vector<VectorXcd> right_snap(levels, VectorXcd::Zero(nr));
    std::vector<VectorXcd> left_snap(levels, VectorXcd::Zero(nl));
    parallel_for(nr, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t r = lo; r < hi; ++r) {
            for (int k = 0; k < levels; ++k) {
                const double tk = std::numbers::pi * k / (s * levels);
                const VectorXcd evolved = evolve(h, backend, right.states[r], tk);
                for (int l = 0; l < nl; ++l)
                    snapshots[k](l, r) = left.states[l].dot(evolved);
                right_snap[k][r] = right.states[r].dot(evolved);
            }
        }
    });
    if (same_family) {
        for (int k = 0; k < levels; ++k) left_snap[k] = right_snap[k];
    } else {
        parallel_for(nl, [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t l = lo; l < hi; ++l)
                for (int k = 0; k < levels; ++k) {
                    const double tk = std::numbers::pi * k / (s * levels);
                    const VectorXcd evolved = evolve(h, backend, left.states[l], tk);
                    left_snap[k][l] = left.states[l].dot(evolved);
                }
        });
    }

    std::vector<MatrixXcd> overlaps(levels);
    Eigen::MatrixXd right_w(nr, levels), left_w(nl, levels);
    for (int m = 0; m < levels; ++m) {
        MatrixXcd acc = MatrixXcd::Zero(nl, nr);
        VectorXcd racc = VectorXcd::Zero(nr), lacc = VectorXcd::Zero(nl);
        const double em = s * (-terms + 2.0 * m);
        for (int k = 0; k < levels; ++k) {
            const double tk = std::numbers::pi * k / (s * levels);
            const cxd ph = std::exp(cxd(0.0, em * tk));
            acc += ph * snapshots[k];
            racc += ph * right_snap[k];
            lacc += ph * left_snap[k];
        }
        overlaps[m] = acc / static_cast<double>(levels);
        right_w.col(m) = (racc / static_cast<double>(levels)).real();
        left_w.col(m) = (lacc / static_cast<double>(levels)).real();
    }

    SpectralSignal sig;
    sig.norm_scale = h.norm_scale;
    std::vector<double> kept_e;
    std::vector<int> kept_idx;
    for (int m = 0; m < levels; ++m) {
        const double weight = overlaps[m].norm() + right_w.col(m).norm() + left_w.col(m).norm();
        if (weight > prune) {
            kept_e.push_back(s * (-terms + 2.0 * m));
            kept_idx.push_back(m);
        }
    }
    sig.energies = Eigen::Map<VectorXd>(kept_e.data(), static_cast<Eigen::Index>(kept_e.size()));
    sig.left_level_weights.resize(nl, static_cast<Eigen::Index>(kept_idx.size()));
    sig.right_level_weights.resize(nr, static_cast<Eigen::Index>(kept_idx.size()));
    for (std::size_t j = 0; j < kept_idx.size(); ++j) {
        sig.level_overlaps.push_back(overlaps[kept_idx[j]]);
        sig.left_level_weights.col(static_cast<Eigen::Index>(j)) = left_w.col(kept_idx[j]);
        sig.right_level_weights.col(static_cast<Eigen::Index>(j)) = right_w.col(kept_idx[j]);
    }
    return sig;
}

}  // namespace qfames
