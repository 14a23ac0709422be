#pragma once

#include "qfames/core.hpp"
#include "qfames/observables.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>

namespace qfames {

using json = nlohmann::json;

/// Model document: {"n_qubits", "terms": [{"coeff","paulis"}], "dense": [[re,im],...]}.
json model_to_json(const PauliSumHamiltonian& h);
PauliSumHamiltonian model_from_json(const json& doc);

/// Row-major complex pairs.
json matrix_to_json(const MatrixXcd& m);
MatrixXcd matrix_from_json(const json& doc);

json state_set_to_json(const StateSet& set);
StateSet state_set_from_json(const json& doc);

json dods_to_json(const DodsEstimate& dods);
json observable_spectrum_to_json(const ObservableSpectrum& spec, double theta_star);

/// Tensor persistence: <prefix>.json header (shape, mode, T, sigma, seed) and
/// <prefix>.bin with little-endian f64 (re, im) pairs in (l, r, n) order.
void save_tensor(const SignalTensor& tensor, const std::filesystem::path& prefix);
SignalTensor load_tensor(const std::filesystem::path& prefix);

void write_landscape_csv(const Landscape& scape, const std::filesystem::path& path);
void write_singular_values_csv(const std::vector<ClusterEstimate>& clusters,
                               const std::filesystem::path& path);

}  // namespace qfames
