#include "qfames/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace qfames {

namespace {

// Lanczos approximation of f(H) v for f = exp(-i t .) or exp(-beta .).
// Returns false if the subspace hit max_subspace without meeting tol.
bool krylov_apply(const PauliSumHamiltonian& h, const VectorXcd& v0, cxd exponent_scale,
                  double tol, int max_subspace, VectorXcd& out) {
    const Eigen::Index d = v0.size();
    const double v0n = v0.norm();
    if (v0n == 0.0) { out = v0; return true; }
    std::vector<VectorXcd> basis;
    basis.push_back(v0 / v0n);
    std::vector<double> alpha, beta;
    VectorXcd w(d);
    for (int k = 0; k < max_subspace; ++k) {
        h.apply(basis[k], w);
        alpha.push_back(basis[k].dot(w).real());
        w -= alpha[k] * basis[k];
        if (k > 0) w -= beta[k - 1] * basis[k - 1];
        for (const auto& q : basis) w -= q.dot(w) * q;
        beta.push_back(w.norm());
        const int m = k + 1;
        // small exponential exp(scale * T_m) e1
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            tri(i, i) = alpha[i];
            if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
        Eigen::VectorXcd f = Eigen::VectorXcd::Zero(m);
        for (int i = 0; i < m; ++i) {
            const cxd amp = std::exp(exponent_scale * es.eigenvalues()[i]);
            f += amp * es.eigenvectors().col(i).cast<cxd>() * es.eigenvectors()(0, i);
        }
        // residual estimate: weight of the next basis vector
        const double res = beta[k] * std::abs(f[m - 1]);
        if (res <= tol * std::max(1.0, f.norm()) || beta[k] < 1e-14 || m == static_cast<int>(d)) {
            out.setZero(d);
            for (int i = 0; i < m; ++i) out += f[i] * basis[i];
            out *= v0n;
            return true;
        }
        if (k + 1 < max_subspace) basis.push_back(w / beta[k]);
    }
    return false;
}

VectorXcd krylov_stepped(const PauliSumHamiltonian& h, const VectorXcd& state, cxd full_exponent,
                         double tol, int max_subspace) {
    // split the exponent until each step converges within the subspace budget
    int steps = 1;
    VectorXcd cur;
    while (true) {
        cur = state;
        VectorXcd next;
        bool ok = true;
        const cxd step = full_exponent / static_cast<double>(steps);
        for (int s = 0; s < steps && ok; ++s) {
            ok = krylov_apply(h, cur, step, tol, max_subspace, next);
            if (ok) cur.swap(next);
        }
        if (ok) return cur;
        steps *= 2;
        if (steps > (1 << 20)) throw std::runtime_error("krylov evolution failed to converge");
    }
}

}  // namespace

EvolutionBackend make_dense_backend(const PauliSumHamiltonian& h) {
    EvolutionBackend b;
    b.kind = EvolutionBackend::Kind::dense_eigen;
    b.spectrum = std::make_shared<Spectrum>(eigendecompose(h));
    return b;
}

EvolutionBackend make_commuting_backend(const PauliSumHamiltonian& h) {
    if (!h.all_commuting)
        throw std::invalid_argument("commuting-product backend requires all_commuting");
    EvolutionBackend b;
    b.kind = EvolutionBackend::Kind::commuting_product;
    return b;
}

EvolutionBackend make_krylov_backend(double tolerance, int max_subspace) {
    EvolutionBackend b;
    b.kind = EvolutionBackend::Kind::krylov;
    b.tolerance = tolerance;
    b.max_subspace = max_subspace;
    return b;
}

VectorXcd evolve(const PauliSumHamiltonian& h, const EvolutionBackend& backend,
                 const VectorXcd& state, double t) {
    if (state.size() != h.dim())
        throw std::invalid_argument("state dimension does not match Hamiltonian");
    if (!std::isfinite(t)) throw std::invalid_argument("evolution time must be finite");
    switch (backend.kind) {
        case EvolutionBackend::Kind::dense_eigen: {
            const Spectrum& s = *backend.spectrum;
            if (s.size() != state.size())
                throw std::invalid_argument("backend/Hamiltonian mismatch");
            VectorXcd c = s.eigenvectors.adjoint() * state;
            for (Eigen::Index m = 0; m < c.size(); ++m)
                c[m] *= std::exp(cxd(0.0, -s.eigenvalues[m] * t));
            return s.eigenvectors * c;
        }
        case EvolutionBackend::Kind::commuting_product: {
            if (!h.all_commuting)
                throw std::invalid_argument("backend/Hamiltonian mismatch: terms do not commute");
            VectorXcd v = state;
            for (const auto& term : h.terms)
                apply_pauli_rotation(term, term.coefficient * t, v);
            return v;
        }
        case EvolutionBackend::Kind::krylov:
            return krylov_stepped(h, state, cxd(0.0, -t), backend.tolerance, backend.max_subspace);
    }
    throw std::logic_error("unreachable");
}

ImaginaryEvolved imaginary_evolve(const PauliSumHamiltonian& h, const EvolutionBackend& backend,
                                  const VectorXcd& state, double beta) {
    if (beta < 0.0) throw std::invalid_argument("imaginary time must be nonnegative");
    if (state.size() != h.dim())
        throw std::invalid_argument("state dimension does not match Hamiltonian");
    ImaginaryEvolved out;
    switch (backend.kind) {
        case EvolutionBackend::Kind::dense_eigen: {
            const Spectrum& s = *backend.spectrum;
            VectorXcd c = s.eigenvectors.adjoint() * state;
            // factor the ground weight out so large beta cannot underflow everything
            const double e0 = s.eigenvalues.minCoeff();
            for (Eigen::Index m = 0; m < c.size(); ++m)
                c[m] *= std::exp(-beta * (s.eigenvalues[m] - e0));
            const double n = c.norm();
            if (n < 1e-300) throw std::runtime_error("state annihilated by imaginary evolution");
            out.state = (s.eigenvectors * c) / n;
            out.weight = n * std::exp(-beta * e0);
            return out;
        }
        case EvolutionBackend::Kind::commuting_product: {
            if (!h.all_commuting)
                throw std::invalid_argument("backend/Hamiltonian mismatch: terms do not commute");
            VectorXcd v = state;
            double log_weight = 0.0;
            for (const auto& term : h.terms) {
                apply_pauli_imaginary(term, -beta * term.coefficient, v);
                const double n = v.norm();  // renormalize per factor to dodge overflow
                if (n < 1e-300) throw std::runtime_error("state annihilated by imaginary evolution");
                v /= n;
                log_weight += std::log(n);
            }
            out.state = v;
            out.weight = std::exp(log_weight);
            return out;
        }
        case EvolutionBackend::Kind::krylov: {
            VectorXcd r = krylov_stepped(h, state, cxd(-beta, 0.0), backend.tolerance, backend.max_subspace);
            const double n = r.norm();
            if (n < 1e-300) throw std::runtime_error("state annihilated by imaginary evolution");
            out.state = r / n;
            out.weight = n;
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace qfames
