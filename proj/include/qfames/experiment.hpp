#pragma once

#include "qfames/oracle.hpp"
#include "qfames/serialize.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace qfames {

struct ModelSpec {
    enum class Kind { illustrative, tfim, toric, file };
    Kind kind = Kind::illustrative;
    int sites = 10;        // tfim
    double coupling = 1.0; // tfim g
    int rows = 2, cols = 4;
    ToricBoundary boundary = ToricBoundary::torus;
    std::filesystem::path path;  // file
};

struct StatePrepSpec {
    enum class Kind { overlap_matrix, haar_boost, lowest_k };
    Kind kind = Kind::overlap_matrix;
    double beta = 0.0;   // haar_boost
    int count = 3;       // family size (haar_boost / lowest_k)
    std::filesystem::path overlap_path;  // optional external overlap matrix
};

struct ObservableSpec {
    enum class Kind { pauli_string, total_z };  // total_z: (1/2L) sum Z_i
    Kind kind = Kind::total_z;
    std::string letters;                        // pauli_string
    PairingMode pairing = PairingMode::product_grid;
    bool shot_mode = false;                     // exact-mode default (Hermitian O)
    int sample_count = 0;                       // 0: reuse qfames N
};

struct ExperimentConfig {
    int schema_version = 1;
    ModelSpec model;
    StatePrepSpec state_prep;
    QfamesConfig qfames;
    TensorMode data_mode = TensorMode::shot;
    int shots_per_entry = 1;
    std::optional<ObservableSpec> observable;
    std::vector<std::uint64_t> seeds{1};
    std::filesystem::path output_dir = "out";
    // oracle comparison (sweeps): dominance constant and clustering geometry
    double oracle_c_p = 10.0;
    double oracle_separation = 0.05;
    double oracle_width = 0.05;
    int qmegs_sample_count = 0;  // 0: L * N (paper's section-6.1 convention)

    void validate() const;
};

ExperimentConfig parse_experiment_config(const json& doc);
json experiment_config_to_json(const ExperimentConfig& config);

/// Canned configurations mirroring the numerical studies.
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

/// Model, states and signal machinery for one seed.
struct PreparedExperiment {
    PauliSumHamiltonian physical;
    PauliSumHamiltonian normalized;
    std::optional<Spectrum> spectrum;  // dense path only
    StateSet states;                   // left = right families
    SpectralSignal signal;
    std::optional<GroundTruth> truth;  // dense path, via brute_force_dods
};

PreparedExperiment prepare_experiment(const ExperimentConfig& config, std::uint64_t seed);

/// One cluster's observable result.
struct ClusterObservable {
    double theta_star = 0.0;
    ObservableSpectrum spectrum;
};

struct SeedRunResult {
    std::uint64_t seed = 0;
    DodsEstimate dods;
    std::vector<ClusterObservable> observables;
    double wall_seconds = 0.0;
};

SeedRunResult run_seed(const ExperimentConfig& config, const PreparedExperiment& prepared,
                       std::uint64_t seed);

/// `qfames run`: full pipeline, writes dods.json, landscape.csv,
/// singular_values.csv, observable.json (if requested) and manifest.json.
int cmd_run(const ExperimentConfig& config, std::ostream& log);

/// `qfames sweep-T`: per (seed, method, T) error rows -> sweep.csv.
int cmd_sweep_t(const ExperimentConfig& config, const std::vector<double>& filter_widths,
                std::ostream& log);

/// `qfames ancilla-check`: reconstruction error report -> reconstruction_report.json.
int cmd_ancilla_check(const ExperimentConfig& config, double h, double grid_dt, std::ostream& log);

}  // namespace qfames
