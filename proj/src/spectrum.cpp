#include "qfames/spectrum.hpp"

#include "qfames/rng.hpp"

#include <stdexcept>

namespace qfames {

Spectrum eigendecompose(const PauliSumHamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h.to_dense());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");
    Spectrum s;
    s.eigenvalues = es.eigenvalues();
    s.eigenvectors = es.eigenvectors();
    s.norm_scale = h.norm_scale;
    return s;
}

LanczosExtremal lanczos_lowest(const PauliSumHamiltonian& h, int count,
                               int max_iterations, std::uint64_t seed) {
    const Eigen::Index d = h.dim();
    const int m = std::min<int>(max_iterations, static_cast<int>(d));
    if (count < 1 || count > m)
        throw std::invalid_argument("lanczos_lowest: bad level count");

    VectorXcd v(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        auto [a, b] = rng::gaussian_pair(rng::key({seed, 0x1a, static_cast<std::uint64_t>(i)}));
        v[i] = cxd(a, b);
    }
    v.normalize();

    std::vector<VectorXcd> basis;
    basis.reserve(m);
    basis.push_back(v);
    VectorXd alpha(m), beta(m);
    VectorXcd w(d);
    int k = 0;
    for (; k < m; ++k) {
        h.apply(basis[k], w);
        alpha[k] = w.dot(basis[k]).real();
        w -= alpha[k] * basis[k];
        if (k > 0) w -= beta[k - 1] * basis[k - 1];
        for (const auto& q : basis) w -= q.dot(w) * q;  // full reorthogonalization
        const double nb = w.norm();
        beta[k] = nb;
        if (nb < 1e-12) { ++k; break; }
        if (k + 1 < m) basis.push_back(w / nb);
    }
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        tri(i, i) = alpha[i];
        if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    LanczosExtremal out;
    const int keep = std::min(count, k);
    out.eigenvalues = es.eigenvalues().head(keep);
    out.eigenvectors.resize(d, keep);
    for (int j = 0; j < keep; ++j) {
        VectorXcd rv = VectorXcd::Zero(d);
        for (int i = 0; i < k; ++i) rv += es.eigenvectors()(i, j) * basis[i];
        out.eigenvectors.col(j) = rv.normalized();
    }
    return out;
}

}  // namespace qfames
