#include "qfames/signal.hpp"

#include "qfames/parallel.hpp"
#include "qfames/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace qfames {

void SignalTensor::validate() const {
    if (data.size() != static_cast<std::size_t>(left_count) * right_count * times.times.size())
        throw std::invalid_argument("tensor data size mismatch");
    times.validate();
    if (mode == TensorMode::exact) {
        for (const cxd& z : data)
            if (std::abs(z) > 1.0 + 1e-9)
                throw std::invalid_argument("exact-mode entries must have |Z| <= 1");
    } else if (shots_per_entry == 1) {
        for (const cxd& z : data)
            if (std::abs(std::abs(z.real()) - 1.0) > 1e-12 || std::abs(std::abs(z.imag()) - 1.0) > 1e-12)
                throw std::invalid_argument("single-shot entries must lie in {+-1 +- i}");
    }
}

SignalTensor exact_signal(const SpectralSignal& signal, const TimeSamples& times) {
    SignalTensor t;
    t.mode = TensorMode::exact;
    t.left_count = signal.left_count();
    t.right_count = signal.right_count();
    t.times = times;
    const int n_samples = times.count();
    t.data.assign(static_cast<std::size_t>(t.left_count) * t.right_count * n_samples, cxd{});
    parallel_for(n_samples, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t n = lo; n < hi; ++n) {
            const MatrixXcd z = signal.value(times.times[n]);
            for (int l = 0; l < t.left_count; ++l)
                for (int r = 0; r < t.right_count; ++r)
                    t.at(l, r, static_cast<int>(n)) = z(l, r);
        }
    });
    return t;
}

SignalTensor exact_signal_direct(const PauliSumHamiltonian& h, const EvolutionBackend& backend,
                                 const StateSet& left, const StateSet& right,
                                 const TimeSamples& times) {
    SignalTensor t;
    t.mode = TensorMode::exact;
    t.left_count = left.count();
    t.right_count = right.count();
    t.times = times;
    const int n_samples = times.count();
    t.data.assign(static_cast<std::size_t>(t.left_count) * t.right_count * n_samples, cxd{});
    const std::int64_t jobs = static_cast<std::int64_t>(t.right_count) * n_samples;
    parallel_for(jobs, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t j = lo; j < hi; ++j) {
            const int r = static_cast<int>(j / n_samples);
            const int n = static_cast<int>(j % n_samples);
            const VectorXcd evolved = evolve(h, backend, right.states[r], times.times[n]);
            for (int l = 0; l < t.left_count; ++l)
                t.at(l, r, n) = left.states[l].dot(evolved);
        }
    });
    return t;
}

namespace {

cxd draw_shot_mean(cxd z, int shots, std::uint64_t seed, std::uint64_t l, std::uint64_t r,
                   std::uint64_t n) {
    if (std::abs(z) > 1.0 + 1e-9)
        throw std::invalid_argument("invalid amplitude: |Z| > 1 cannot be shot-sampled");
    const double p_re = std::min(1.0, std::max(0.0, (1.0 + z.real()) / 2.0));
    const double p_im = std::min(1.0, std::max(0.0, (1.0 + z.imag()) / 2.0));
    double acc_re = 0.0, acc_im = 0.0;
    for (int s = 0; s < shots; ++s) {
        const std::uint64_t su = static_cast<std::uint64_t>(s);
        acc_re += rng::uniform(rng::key({seed, 0xeu, l, r, n, su, 0})) < p_re ? 1.0 : -1.0;
        acc_im += rng::uniform(rng::key({seed, 0xeu, l, r, n, su, 1})) < p_im ? 1.0 : -1.0;
    }
    return cxd(acc_re / shots, acc_im / shots);
}

}  // namespace

SignalTensor shot_sample(const SignalTensor& exact, int shots_per_entry, std::uint64_t seed) {
    if (exact.mode != TensorMode::exact)
        throw std::invalid_argument("shot_sample expects an exact-mode tensor");
    if (shots_per_entry < 1) throw std::invalid_argument("shots_per_entry must be >= 1");
    SignalTensor out = exact;
    out.mode = TensorMode::shot;
    out.shots_per_entry = shots_per_entry;
    const int n_samples = exact.sample_count();
    parallel_for(static_cast<std::int64_t>(exact.left_count) * exact.right_count,
                 [&](std::int64_t lo, std::int64_t hi) {
                     for (std::int64_t lr = lo; lr < hi; ++lr) {
                         const int l = static_cast<int>(lr / exact.right_count);
                         const int r = static_cast<int>(lr % exact.right_count);
                         for (int n = 0; n < n_samples; ++n)
                             out.at(l, r, n) = draw_shot_mean(exact.at(l, r, n), shots_per_entry,
                                                              seed, l, r, n);
                     }
                 });
    return out;
}

SignalTensor restrict_tensor(const SignalTensor& tensor, int l, int r) {
    if (l < 0 || l >= tensor.left_count || r < 0 || r >= tensor.right_count)
        throw std::invalid_argument("restrict_tensor: pair out of range");
    SignalTensor out;
    out.mode = tensor.mode;
    out.left_count = out.right_count = 1;
    out.times = tensor.times;
    out.shots_per_entry = tensor.shots_per_entry;
    out.data.resize(tensor.times.times.size());
    for (int n = 0; n < tensor.sample_count(); ++n) out.data[n] = tensor.at(l, r, n);
    return out;
}

std::string to_string(PairingMode mode) {
    return mode == PairingMode::iid_pairs ? "iid-pairs" : "product-grid";
}

PairingMode pairing_mode_from_string(const std::string& name) {
    if (name == "iid-pairs") return PairingMode::iid_pairs;
    if (name == "product-grid") return PairingMode::product_grid;
    throw std::invalid_argument("unknown pairing mode: " + name);
}

bool Observable::is_unitary() const {
    const MatrixXcd prod = matrix * matrix.adjoint();
    return (prod - MatrixXcd::Identity(matrix.rows(), matrix.cols())).cwiseAbs().maxCoeff() < 1e-9;
}

void Observable::validate() const {
    if (matrix.rows() != matrix.cols()) throw std::invalid_argument("observable must be square");
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("observable must be Hermitian");
}

Observable pauli_observable(const PauliTerm& term) {
    const int n = static_cast<int>(term.letters.size());
    const Eigen::Index d = Eigen::Index{1} << n;
    Observable o;
    o.id = term.letters;
    o.matrix.resize(d, d);
    VectorXcd e = VectorXcd::Zero(d), col(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        e[j] = 1.0;
        apply_pauli_string(term, e, col);
        o.matrix.col(j) = col;
        e[j] = 0.0;
    }
    return o;
}

std::pair<TimeSamples, TimeSamples> pair_time_samples(const TimeSamples& base,
                                                      const TimeSamples& base_prime,
                                                      PairingMode pairing) {
    if (pairing == PairingMode::iid_pairs) {
        if (base.count() != base_prime.count())
            throw std::invalid_argument("iid pairing needs equal sample counts");
        return {base, base_prime};
    }
    TimeSamples t = base, tp = base_prime;
    t.times.clear();
    tp.times.clear();
    for (double a : base_prime.times)    // t' varies slowly across the grid
        for (double b : base.times) {
            t.times.push_back(b);
            tp.times.push_back(a);
        }
    return {t, tp};
}

ObservableTensor observable_exact_signal(const Spectrum& spectrum, const StateSet& left,
                                         const StateSet& right, const Observable& obs,
                                         const TimeSamples& times, const TimeSamples& times_prime,
                                         PairingMode pairing) {
    obs.validate();
    if (obs.matrix.rows() != spectrum.eigenvectors.rows())
        throw std::invalid_argument("observable dimension does not match spectrum");
    if (times.count() != times_prime.count())
        throw std::invalid_argument("paired time sequences must have equal length");
    auto [phi, psi] = overlap_matrices(spectrum, left, right);

    // restrict to eigenvector columns either family actually touches
    std::vector<Eigen::Index> active;
    for (Eigen::Index m = 0; m < spectrum.size(); ++m)
        if (phi.col(m).norm() > 1e-13 || psi.col(m).norm() > 1e-13) active.push_back(m);
    const Eigen::Index k = static_cast<Eigen::Index>(active.size());
    MatrixXcd phi_a(phi.rows(), k), psi_a(psi.rows(), k);
    VectorXd lam_a(k);
    MatrixXcd vec_a(spectrum.eigenvectors.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
        phi_a.col(j) = phi.col(active[j]);
        psi_a.col(j) = psi.col(active[j]);
        lam_a[j] = spectrum.eigenvalues[active[j]];
        vec_a.col(j) = spectrum.eigenvectors.col(active[j]);
    }
    const MatrixXcd obs_eig = vec_a.adjoint() * obs.matrix * vec_a;  // k x k block of O_[M]

    ObservableTensor t;
    t.mode = TensorMode::exact;
    t.left_count = left.count();
    t.right_count = right.count();
    t.times = times;
    t.times_prime = times_prime;
    t.pairing = pairing;
    t.observable_id = obs.id;
    const int n_samples = times.count();
    t.data.assign(static_cast<std::size_t>(t.left_count) * t.right_count * n_samples, cxd{});
    parallel_for(n_samples, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t n = lo; n < hi; ++n) {
            VectorXcd el(k), er(k);
            for (Eigen::Index j = 0; j < k; ++j) {
                el[j] = std::exp(cxd(0.0, lam_a[j] * times_prime.times[n]));
                er[j] = std::exp(cxd(0.0, -lam_a[j] * times.times[n]));
            }
            const MatrixXcd z = (phi_a * el.asDiagonal()) * obs_eig * (er.asDiagonal() * psi_a.adjoint());
            for (int l = 0; l < t.left_count; ++l)
                for (int r = 0; r < t.right_count; ++r)
                    t.at(l, r, static_cast<int>(n)) = z(l, r);
        }
    });
    return t;
}

ObservableTensor observable_shot_sample(const ObservableTensor& exact, std::uint64_t seed) {
    if (exact.mode != TensorMode::exact)
        throw std::invalid_argument("observable_shot_sample expects an exact-mode tensor");
    ObservableTensor out = exact;
    out.mode = TensorMode::shot;
    out.shots_per_entry = 1;
    const int n_samples = exact.sample_count();
    for (int l = 0; l < exact.left_count; ++l)
        for (int r = 0; r < exact.right_count; ++r)
            for (int n = 0; n < n_samples; ++n)
                out.at(l, r, n) = draw_shot_mean(exact.at(l, r, n), 1, seed ^ 0xab12u, l, r, n);
    return out;
}

}  // namespace qfames
