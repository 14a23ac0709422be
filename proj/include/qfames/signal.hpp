#pragma once

#include "qfames/spectral_signal.hpp"

namespace qfames {

enum class TensorMode { exact, shot };

/// The L x R x N data tensor Z with its time samples.
struct SignalTensor {
    TensorMode mode = TensorMode::exact;
    int left_count = 0;
    int right_count = 0;
    TimeSamples times;
    int shots_per_entry = 1;            // shot mode
    std::vector<cxd> data;              // (l, r, n) row-major

    int sample_count() const { return times.count(); }
    std::size_t index(int l, int r, int n) const {
        return (static_cast<std::size_t>(l) * right_count + r) * times.times.size() + n;
    }
    cxd& at(int l, int r, int n) { return data[index(l, r, n)]; }
    const cxd& at(int l, int r, int n) const { return data[index(l, r, n)]; }
    void validate() const;
};

/// Exact entries Z_{l,r,n} = sum_m Phi e^{-i lam t_n} Psi^dag from the level
/// representation.
SignalTensor exact_signal(const SpectralSignal& signal, const TimeSamples& times);

/// Dual-path oracle: entries via direct backend evolution <phi_l|e^{-iHt}|psi_r>.
SignalTensor exact_signal_direct(const PauliSumHamiltonian& h, const EvolutionBackend& backend,
                                 const StateSet& left, const StateSet& right,
                                 const TimeSamples& times);

/// Single-shot generalized-Hadamard-test outcomes: each entry is the average of
/// `shots_per_entry` draws of X + iY with X,Y in {+-1},
/// P(X=+1) = (1+Re Z)/2, P(Y=+1) = (1+Im Z)/2 independently.
/// Counter-based RNG keyed by (seed, l, r, n, shot).
SignalTensor shot_sample(const SignalTensor& exact, int shots_per_entry, std::uint64_t seed);

/// View of a single (l, r) pair as a 1 x 1 x N tensor (QMEGS restriction).
SignalTensor restrict_tensor(const SignalTensor& tensor, int l, int r);

enum class PairingMode { iid_pairs, product_grid };
std::string to_string(PairingMode mode);
PairingMode pairing_mode_from_string(const std::string& name);

/// Hermitian observable in the computational basis. Shot sampling additionally
/// requires it to be unitary (|entries| <= 1); exact mode does not.
struct Observable {
    MatrixXcd matrix;
    std::string id;
    bool is_unitary() const;
    void validate() const;  // Hermiticity
};

/// Pauli-string observable (always unitary Hermitian).
Observable pauli_observable(const PauliTerm& term);

/// The L x R x N observable tensor with two time axes
/// Z^O_{l,r,n} = <phi_l| e^{i H t'_n} O e^{-i H t_n} |psi_r>.
struct ObservableTensor {
    TensorMode mode = TensorMode::exact;
    int left_count = 0;
    int right_count = 0;
    TimeSamples times;        // t_n, expanded to entry count
    TimeSamples times_prime;  // t'_n, expanded to entry count
    PairingMode pairing = PairingMode::iid_pairs;
    std::string observable_id;
    int shots_per_entry = 1;
    std::vector<cxd> data;

    int sample_count() const { return times.count(); }
    std::size_t index(int l, int r, int n) const {
        return (static_cast<std::size_t>(l) * right_count + r) * times.times.size() + n;
    }
    cxd& at(int l, int r, int n) { return data[index(l, r, n)]; }
    const cxd& at(int l, int r, int n) const { return data[index(l, r, n)]; }
};

/// Expand two base sample sets into entry-aligned (t_n, t'_n) sequences.
/// product_grid enumerates the full K x K grid (base sets must have K = sqrt(N)
/// samples each); iid_pairs pairs them index-wise.
std::pair<TimeSamples, TimeSamples> pair_time_samples(const TimeSamples& base,
                                                      const TimeSamples& base_prime,
                                                      PairingMode pairing);

/// Exact observable entries via the eigenbasis triple product. Only the
/// eigenvector columns with nonvanishing overlap on either side participate.
ObservableTensor observable_exact_signal(const Spectrum& spectrum, const StateSet& left,
                                         const StateSet& right, const Observable& obs,
                                         const TimeSamples& times, const TimeSamples& times_prime,
                                         PairingMode pairing);

/// Shot sampling of an exact observable tensor (requires unitary O).
ObservableTensor observable_shot_sample(const ObservableTensor& exact, std::uint64_t seed);

}  // namespace qfames
