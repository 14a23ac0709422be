#include "qfames/experiment.hpp"

#include "qfames/ancilla_free.hpp"
#include "qfames/rng.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>

namespace qfames {

namespace {

void reject_unknown_keys(const json& doc, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : doc.items())
        if (!allowed.count(key))
            throw std::invalid_argument("unknown key '" + key + "' in " + where);
}

ModelSpec parse_model(const json& doc) {
    reject_unknown_keys(doc, {"kind", "sites", "g", "rows", "cols", "boundary", "path"}, "model");
    ModelSpec m;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "illustrative") {
        m.kind = ModelSpec::Kind::illustrative;
    } else if (kind == "tfim") {
        m.kind = ModelSpec::Kind::tfim;
        m.sites = doc.at("sites").get<int>();
        m.coupling = doc.at("g").get<double>();
    } else if (kind == "toric") {
        m.kind = ModelSpec::Kind::toric;
        m.rows = doc.at("rows").get<int>();
        m.cols = doc.at("cols").get<int>();
        const std::string b = doc.at("boundary").get<std::string>();
        if (b == "torus") m.boundary = ToricBoundary::torus;
        else if (b == "cylinder") m.boundary = ToricBoundary::cylinder;
        else throw std::invalid_argument("boundary must be torus or cylinder");
    } else if (kind == "file") {
        m.kind = ModelSpec::Kind::file;
        m.path = doc.at("path").get<std::string>();
    } else {
        throw std::invalid_argument("unknown model kind: " + kind);
    }
    return m;
}

StatePrepSpec parse_state_prep(const json& doc) {
    reject_unknown_keys(doc, {"kind", "beta", "count", "overlap_path"}, "state_prep");
    StatePrepSpec s;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "overlap-matrix") {
        s.kind = StatePrepSpec::Kind::overlap_matrix;
        if (doc.contains("overlap_path")) s.overlap_path = doc.at("overlap_path").get<std::string>();
    } else if (kind == "haar-boost") {
        s.kind = StatePrepSpec::Kind::haar_boost;
        s.beta = doc.at("beta").get<double>();
        s.count = doc.at("count").get<int>();
    } else if (kind == "lowest-k") {
        s.kind = StatePrepSpec::Kind::lowest_k;
        s.count = doc.at("count").get<int>();
    } else {
        throw std::invalid_argument("unknown state_prep kind: " + kind);
    }
    return s;
}

QfamesConfig parse_qfames(const json& doc) {
    reject_unknown_keys(doc, {"N", "T", "sigma", "I_guess", "tau", "q", "alpha", "time_sampling"},
                        "qfames");
    QfamesConfig c;
    c.sample_count = doc.at("N").get<int>();
    c.filter_width = doc.at("T").get<double>();
    c.truncation = doc.at("sigma").get<double>();
    c.cluster_guess = doc.at("I_guess").get<int>();
    c.svd_threshold = doc.at("tau").get<double>();
    c.search_step = doc.at("q").get<double>();
    c.block_param = doc.at("alpha").get<double>();
    if (doc.contains("time_sampling"))
        c.time_sampling = truncation_mode_from_string(doc.at("time_sampling").get<std::string>());
    return c;
}

ObservableSpec parse_observable(const json& doc) {
    reject_unknown_keys(doc, {"kind", "letters", "pairing", "shot_mode", "N"}, "observable");
    ObservableSpec o;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "pauli") {
        o.kind = ObservableSpec::Kind::pauli_string;
        o.letters = doc.at("letters").get<std::string>();
    } else if (kind == "total-z") {
        o.kind = ObservableSpec::Kind::total_z;
    } else {
        throw std::invalid_argument("unknown observable kind: " + kind);
    }
    if (doc.contains("pairing")) o.pairing = pairing_mode_from_string(doc.at("pairing").get<std::string>());
    o.shot_mode = doc.value("shot_mode", false);
    o.sample_count = doc.value("N", 0);
    return o;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (schema_version != 1) throw std::invalid_argument("unsupported schema_version");
    qfames.validate();
    if (seeds.empty()) throw std::invalid_argument("seed list must be nonempty");
    if (shots_per_entry < 1) throw std::invalid_argument("shots_per_entry must be >= 1");
    if (state_prep.count < 1) throw std::invalid_argument("state family must be nonempty");
    if (observable && observable->kind == ObservableSpec::Kind::pauli_string &&
        observable->letters.empty())
        throw std::invalid_argument("pauli observable needs letters");
}

ExperimentConfig parse_experiment_config(const json& doc) {
    reject_unknown_keys(doc,
                        {"schema_version", "model", "state_prep", "qfames", "data_mode",
                         "shots_per_entry", "observable", "seeds", "output_dir", "oracle",
                         "qmegs_N"},
                        "config");
    ExperimentConfig c;
    c.schema_version = doc.at("schema_version").get<int>();
    c.model = parse_model(doc.at("model"));
    c.state_prep = parse_state_prep(doc.at("state_prep"));
    c.qfames = parse_qfames(doc.at("qfames"));
    const std::string mode = doc.value("data_mode", "shot");
    if (mode == "shot") c.data_mode = TensorMode::shot;
    else if (mode == "exact") c.data_mode = TensorMode::exact;
    else throw std::invalid_argument("data_mode must be exact or shot");
    c.shots_per_entry = doc.value("shots_per_entry", 1);
    if (doc.contains("observable") && !doc.at("observable").is_null())
        c.observable = parse_observable(doc.at("observable"));
    c.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    c.output_dir = doc.value("output_dir", std::string("out"));
    if (doc.contains("oracle")) {
        const json& o = doc.at("oracle");
        reject_unknown_keys(o, {"C_p", "separation", "width"}, "oracle");
        c.oracle_c_p = o.value("C_p", 10.0);
        c.oracle_separation = o.value("separation", 0.05);
        c.oracle_width = o.value("width", 0.05);
    }
    c.qmegs_sample_count = doc.value("qmegs_N", 0);
    c.validate();
    return c;
}

json experiment_config_to_json(const ExperimentConfig& c) {
    json doc;
    doc["schema_version"] = c.schema_version;
    switch (c.model.kind) {
        case ModelSpec::Kind::illustrative: doc["model"] = {{"kind", "illustrative"}}; break;
        case ModelSpec::Kind::tfim:
            doc["model"] = {{"kind", "tfim"}, {"sites", c.model.sites}, {"g", c.model.coupling}};
            break;
        case ModelSpec::Kind::toric:
            doc["model"] = {{"kind", "toric"},
                            {"rows", c.model.rows},
                            {"cols", c.model.cols},
                            {"boundary", c.model.boundary == ToricBoundary::torus ? "torus" : "cylinder"}};
            break;
        case ModelSpec::Kind::file:
            doc["model"] = {{"kind", "file"}, {"path", c.model.path.string()}};
            break;
    }
    switch (c.state_prep.kind) {
        case StatePrepSpec::Kind::overlap_matrix:
            doc["state_prep"] = {{"kind", "overlap-matrix"}};
            if (!c.state_prep.overlap_path.empty())
                doc["state_prep"]["overlap_path"] = c.state_prep.overlap_path.string();
            break;
        case StatePrepSpec::Kind::haar_boost:
            doc["state_prep"] = {{"kind", "haar-boost"}, {"beta", c.state_prep.beta},
                                 {"count", c.state_prep.count}};
            break;
        case StatePrepSpec::Kind::lowest_k:
            doc["state_prep"] = {{"kind", "lowest-k"}, {"count", c.state_prep.count}};
            break;
    }
    doc["qfames"] = {{"N", c.qfames.sample_count},     {"T", c.qfames.filter_width},
                     {"sigma", c.qfames.truncation},   {"I_guess", c.qfames.cluster_guess},
                     {"tau", c.qfames.svd_threshold},  {"q", c.qfames.search_step},
                     {"alpha", c.qfames.block_param},
                     {"time_sampling", to_string(c.qfames.time_sampling)}};
    doc["data_mode"] = c.data_mode == TensorMode::shot ? "shot" : "exact";
    doc["shots_per_entry"] = c.shots_per_entry;
    if (c.observable) {
        json o;
        o["kind"] = c.observable->kind == ObservableSpec::Kind::pauli_string ? "pauli" : "total-z";
        if (c.observable->kind == ObservableSpec::Kind::pauli_string)
            o["letters"] = c.observable->letters;
        o["pairing"] = to_string(c.observable->pairing);
        o["shot_mode"] = c.observable->shot_mode;
        if (c.observable->sample_count) o["N"] = c.observable->sample_count;
        doc["observable"] = o;
    }
    doc["seeds"] = c.seeds;
    doc["output_dir"] = c.output_dir.string();
    doc["oracle"] = {{"C_p", c.oracle_c_p}, {"separation", c.oracle_separation},
                     {"width", c.oracle_width}};
    if (c.qmegs_sample_count) doc["qmegs_N"] = c.qmegs_sample_count;
    return doc;
}

ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig c;
    if (name == "illustrative") {
        c.model.kind = ModelSpec::Kind::illustrative;
        c.state_prep.kind = StatePrepSpec::Kind::overlap_matrix;
        c.qfames = {};  // N=2000, T=40, sigma=1, I=2, tau=0.3, q=0.005, alpha=5
        c.seeds.clear();
        for (std::uint64_t s = 1; s <= 20; ++s) c.seeds.push_back(s);
        c.oracle_separation = 0.05;
        c.oracle_width = 1e-9;
    } else if (name == "tfim") {
        c.model.kind = ModelSpec::Kind::tfim;
        c.model.sites = 10;
        c.model.coupling = 0.5;
        c.state_prep.kind = StatePrepSpec::Kind::lowest_k;
        c.state_prep.count = 5;
        c.qfames.sample_count = 10000;
        c.qfames.filter_width = 44.6;
        c.qfames.truncation = 1.0;
        c.qfames.cluster_guess = 5;
        c.qfames.svd_threshold = 0.2;
        c.qfames.search_step = 0.005;
        c.qfames.block_param = 5.0;
        c.observable = ObservableSpec{};  // total-z, product grid, exact mode
        c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        c.oracle_separation = 0.05;
        c.oracle_width = 0.05;
    } else if (name == "toric-torus-2x4" || name == "toric-cyl-2x4") {
        c.model.kind = ModelSpec::Kind::toric;
        c.model.rows = 2;
        c.model.cols = 4;
        c.model.boundary =
            name == "toric-torus-2x4" ? ToricBoundary::torus : ToricBoundary::cylinder;
        c.state_prep.kind = StatePrepSpec::Kind::haar_boost;
        c.state_prep.beta = 10.0;
        c.state_prep.count = 15;
        c.qfames.sample_count = 300;
        c.qfames.filter_width = 10.0;
        c.qfames.truncation = 1.0;
        c.qfames.cluster_guess = 1;
        c.qfames.svd_threshold = 1.0;  // sqrt(L R) / 15
        c.qfames.search_step = 0.005;
        c.qfames.block_param = 5.0;
        c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    c.validate();
    return c;
}

std::vector<std::string> preset_names() {
    return {"illustrative", "tfim", "toric-torus-2x4", "toric-cyl-2x4"};
}

namespace {

PauliSumHamiltonian build_model(const ModelSpec& spec, MatrixXcd* known_overlaps) {
    switch (spec.kind) {
        case ModelSpec::Kind::illustrative: {
            auto m = build_illustrative();
            if (known_overlaps) *known_overlaps = m.overlaps;
            return m.hamiltonian;
        }
        case ModelSpec::Kind::tfim: return build_tfim(spec.sites, spec.coupling);
        case ModelSpec::Kind::toric: return build_toric(spec.rows, spec.cols, spec.boundary);
        case ModelSpec::Kind::file: {
            std::ifstream in(spec.path);
            if (!in) throw std::invalid_argument("cannot open model file " + spec.path.string());
            return model_from_json(json::parse(in));
        }
    }
    throw std::logic_error("unreachable");
}

/// Orthonormal mixtures of the `count` lowest eigenvectors (seeded Haar unitary).
MatrixXcd lowest_k_overlaps(int count, Eigen::Index dim, std::uint64_t seed) {
    MatrixXcd a(count, count);
    for (int i = 0; i < count; ++i)
        for (int j = 0; j < count; ++j) {
            auto [re, im] = rng::gaussian_pair(rng::key(
                {seed, 0x10e5u, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)}));
            a(i, j) = cxd(re, im);
        }
    const Eigen::HouseholderQR<MatrixXcd> qr(a);
    MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(count, count);
    MatrixXcd overlaps = MatrixXcd::Zero(count, dim);
    overlaps.leftCols(count) = q;
    return overlaps;
}

}  // namespace

PreparedExperiment prepare_experiment(const ExperimentConfig& config, std::uint64_t seed) {
    PreparedExperiment prep;
    MatrixXcd model_overlaps;
    prep.physical = build_model(config.model, &model_overlaps);
    prep.physical.validate();
    prep.normalized = normalize_spectrum(prep.physical);

    const bool dense_path = prep.normalized.dim() <= (Eigen::Index{1} << 13);
    if (dense_path) prep.spectrum = eigendecompose(prep.normalized);

    switch (config.state_prep.kind) {
        case StatePrepSpec::Kind::overlap_matrix: {
            if (!prep.spectrum)
                throw std::invalid_argument("overlap-matrix state prep needs the dense path");
            MatrixXcd overlaps = model_overlaps;
            if (!config.state_prep.overlap_path.empty()) {
                std::ifstream in(config.state_prep.overlap_path);
                if (!in) throw std::invalid_argument("cannot open overlap matrix file");
                overlaps = matrix_from_json(json::parse(in));
            }
            if (overlaps.size() == 0)
                throw std::invalid_argument("model provides no overlap matrix; supply overlap_path");
            prep.states = states_from_overlaps(*prep.spectrum, overlaps);
            break;
        }
        case StatePrepSpec::Kind::haar_boost: {
            // boosting acts on the physical Hamiltonian, before normalization
            const EvolutionBackend boost_backend =
                prep.physical.all_commuting ? make_commuting_backend(prep.physical)
                : dense_path               ? make_dense_backend(prep.physical)
                                           : make_krylov_backend();
            prep.states = boosted_random_states(prep.physical, boost_backend,
                                                config.state_prep.beta, config.state_prep.count,
                                                rng::key({seed, 0x57a7e5u}));
            break;
        }
        case StatePrepSpec::Kind::lowest_k: {
            if (!prep.spectrum)
                throw std::invalid_argument("lowest-k state prep needs the dense path");
            const MatrixXcd overlaps = lowest_k_overlaps(
                config.state_prep.count, prep.spectrum->size(), rng::key({seed, 0x10e5u}));
            prep.states = states_from_overlaps(*prep.spectrum, overlaps);
            break;
        }
    }

    if (prep.spectrum) {
        prep.signal = spectral_signal_from_spectrum(*prep.spectrum, prep.states, prep.states);
        auto [phi, psi] = overlap_matrices(*prep.spectrum, prep.states, prep.states);
        prep.truth = brute_force_dods(*prep.spectrum, phi, psi, config.oracle_c_p,
                                      config.oracle_separation, config.oracle_width);
    } else {
        if (!prep.normalized.all_commuting)
            throw std::invalid_argument("large non-commuting models are out of the supported range");
        prep.signal = spectral_signal_from_commuting(prep.normalized, prep.states, prep.states);
    }
    return prep;
}

namespace {

Observable build_observable(const ObservableSpec& spec, const PauliSumHamiltonian& h) {
    if (spec.kind == ObservableSpec::Kind::pauli_string) {
        if (static_cast<int>(spec.letters.size()) != h.n_qubits)
            throw std::invalid_argument("observable string length must match qubit count");
        return pauli_observable(PauliTerm{1.0, spec.letters});
    }
    // total-z: (1 / 2L) sum_i Z_i, diagonal
    const Eigen::Index d = h.dim();
    if (!h.n_qubits) throw std::invalid_argument("total-z needs a qubit model");
    Observable o;
    o.id = "total-z";
    VectorXd diag = VectorXd::Zero(d);
    for (Eigen::Index s = 0; s < d; ++s) {
        int acc = 0;
        for (int q = 0; q < h.n_qubits; ++q) acc += ((s >> q) & 1) ? -1 : 1;
        diag[s] = acc / (2.0 * h.n_qubits);
    }
    o.matrix = diag.cast<cxd>().asDiagonal();
    return o;
}

}  // namespace

SeedRunResult run_seed(const ExperimentConfig& config, const PreparedExperiment& prepared,
                       std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    SeedRunResult result;
    result.seed = seed;

    QfamesConfig qc = config.qfames;
    qc.seed = seed;
    const TimeSamples times = sample_times(qc.filter_width, qc.truncation, qc.sample_count,
                                           seed, qc.time_sampling);
    SignalTensor tensor = exact_signal(prepared.signal, times);
    if (config.data_mode == TensorMode::shot)
        tensor = shot_sample(tensor, config.shots_per_entry, rng::key({seed, 0x5807u}));
    result.dods = run_qfames(tensor, qc);
    result.dods.norm_scale = prepared.normalized.norm_scale;

    if (config.observable) {
        if (!prepared.spectrum)
            throw std::invalid_argument("observable stage needs the dense path");
        const Observable obs = build_observable(*config.observable, prepared.normalized);
        const int n_obs = config.observable->sample_count ? config.observable->sample_count
                                                          : qc.sample_count;
        int n_base = n_obs;
        if (config.observable->pairing == PairingMode::product_grid) {
            n_base = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n_obs))));
            n_base = std::max(1, n_base);
        }
        const double wol = qc.filter_width / std::numbers::sqrt2;
        const TimeSamples ts = sample_times(wol, qc.truncation, n_base,
                                            rng::key({seed, 0x0b5u, 1}), qc.time_sampling);
        const TimeSamples tps = sample_times(wol, qc.truncation, n_base,
                                             rng::key({seed, 0x0b5u, 2}), qc.time_sampling);
        auto [te, tpe] = pair_time_samples(ts, tps, config.observable->pairing);
        ObservableTensor ot = observable_exact_signal(*prepared.spectrum, prepared.states,
                                                      prepared.states, obs, te, tpe,
                                                      config.observable->pairing);
        if (config.observable->shot_mode) {
            if (!obs.is_unitary())
                throw std::invalid_argument("shot-mode observable must be unitary");
            ot = observable_shot_sample(ot, rng::key({seed, 0x0b55807u}));
        }
        for (const auto& cluster : result.dods.clusters) {
            const MatrixXcd go = filtered_observable_matrix(ot, cluster.theta_star);
            const ProjectedPair pair = projected_pair(cluster, go);
            result.observables.push_back({cluster.theta_star, solve_generalized(pair)});
        }
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

namespace {

json theorem_condition_report(const QfamesConfig& c) {
    json rep;
    rep["grid_step_q_over_T"] = c.grid_step();
    rep["grid_points_J"] =
        static_cast<std::int64_t>(std::floor(2.0 * std::numbers::pi * c.filter_width / c.search_step));
    rep["block_interval_length_alpha_over_T"] = c.block_param / c.filter_width;
    rep["max_time_sigma_T"] = c.truncation * c.filter_width;
    rep["conditions"] = {"T = Omega~(1/Delta)", "N = Omega~(L R p_tail^-2)",
                         "tau = Theta(p_tail)", "q = O(p_tail / ((1+sigma) sqrt(K L R)))",
                         "alpha = Omega(log(K L R / p_tail)), alpha = O(Delta T)"};
    return rep;
}

}  // namespace

int cmd_run(const ExperimentConfig& config, std::ostream& log) {
    config.validate();
    std::filesystem::create_directories(config.output_dir);
    const auto t0 = std::chrono::steady_clock::now();

    json manifest;
    manifest["config"] = experiment_config_to_json(config);
    manifest["theorem_report"] = theorem_condition_report(config.qfames);
    json all_dods = json::array();
    json all_obs = json::array();

    bool first = true;
    for (std::uint64_t seed : config.seeds) {
        const PreparedExperiment prep = prepare_experiment(config, seed);
        const SeedRunResult res = run_seed(config, prep, seed);
        manifest["norm_scale"] = prep.normalized.norm_scale;
        json d = dods_to_json(res.dods);
        d["seed"] = seed;
        all_dods.push_back(d);
        for (const auto& co : res.observables) {
            json o = observable_spectrum_to_json(co.spectrum, co.theta_star);
            o["seed"] = seed;
            all_obs.push_back(o);
        }
        if (first) {
            // landscape + singular value exports for the first seed
            QfamesConfig qc = config.qfames;
            qc.seed = seed;
            const TimeSamples times = sample_times(qc.filter_width, qc.truncation,
                                                   qc.sample_count, seed, qc.time_sampling);
            SignalTensor tensor = exact_signal(prep.signal, times);
            if (config.data_mode == TensorMode::shot)
                tensor = shot_sample(tensor, config.shots_per_entry, rng::key({seed, 0x5807u}));
            write_landscape_csv(landscape(tensor, qc), config.output_dir / "landscape.csv");
            std::vector<ClusterEstimate> all = res.dods.clusters;
            all.insert(all.end(), res.dods.discarded.begin(), res.dods.discarded.end());
            write_singular_values_csv(all, config.output_dir / "singular_values.csv");
            first = false;
        }
        log << "seed " << seed << ": " << res.dods.clusters.size() << " cluster(s),"
            << " total multiplicity " << res.dods.total_multiplicity << ", "
            << res.wall_seconds << " s\n";
    }

    std::ofstream(config.output_dir / "dods.json") << json({{"runs", all_dods}}).dump(2) << '\n';
    if (config.observable)
        std::ofstream(config.output_dir / "observable.json")
            << json({{"runs", all_obs}}).dump(2) << '\n';
    manifest["seeds"] = config.seeds;
    manifest["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream(config.output_dir / "manifest.json") << manifest.dump(2) << '\n';
    return 0;
}

int cmd_sweep_t(const ExperimentConfig& config, const std::vector<double>& filter_widths,
                std::ostream& log) {
    config.validate();
    if (filter_widths.empty()) throw std::invalid_argument("empty T list");
    for (double t : filter_widths)
        if (t <= 0.0) throw std::invalid_argument("T values must be positive");
    std::filesystem::create_directories(config.output_dir);
    std::ofstream csv(config.output_dir / "sweep.csv");
    csv << "seed,method,T,T_max,T_total,error\n";
    csv.precision(17);

    for (std::uint64_t seed : config.seeds) {
        const PreparedExperiment prep = prepare_experiment(config, seed);
        if (!prep.truth || !prep.truth->dominance_found)
            throw std::invalid_argument("sweep-T needs a dense-path oracle ground truth");
        std::vector<double> truth_centers;
        for (const auto& c : prep.truth->clusters) truth_centers.push_back(c.center);
        const int lr = prep.states.count();
        const int qmegs_n = config.qmegs_sample_count ? config.qmegs_sample_count
                                                      : lr * config.qfames.sample_count;
        for (double t : filter_widths) {
            QfamesConfig qc = config.qfames;
            qc.filter_width = t;
            qc.seed = seed;
            qc.cluster_guess = static_cast<int>(truth_centers.size());
            {
                const TimeSamples times = sample_times(t, qc.truncation, qc.sample_count,
                                                       rng::key({seed, 0x3aee7u}), qc.time_sampling);
                SignalTensor tensor = exact_signal(prep.signal, times);
                if (config.data_mode == TensorMode::shot)
                    tensor = shot_sample(tensor, config.shots_per_entry, rng::key({seed, 0x5807u}));
                const DodsEstimate dods = run_qfames(tensor, qc);
                std::vector<double> centers;
                for (const auto& c : dods.clusters) centers.push_back(c.theta_star);
                // all candidates count for the location error, reported or not
                for (const auto& c : dods.discarded) centers.push_back(c.theta_star);
                centers.resize(std::min(centers.size(), truth_centers.size()));
                const double err = error_metric(centers, truth_centers);
                csv << seed << ",qfames," << t << ',' << qc.truncation * t << ','
                    << static_cast<double>(lr) * lr * qc.sample_count * qc.truncation * t << ','
                    << err << '\n';
            }
            {
                QfamesConfig mc = qc;
                mc.sample_count = qmegs_n;
                const TimeSamples times = sample_times(t, mc.truncation, mc.sample_count,
                                                       rng::key({seed, 0x63e65u}), mc.time_sampling);
                const SpectralSignal diag = [&] {
                    SpectralSignal s;
                    s.energies = prep.signal.energies;
                    s.norm_scale = prep.signal.norm_scale;
                    for (const auto& m : prep.signal.level_overlaps)
                        s.level_overlaps.push_back(m.block(0, 0, 1, 1));
                    s.left_level_weights = prep.signal.left_level_weights.topRows(1);
                    s.right_level_weights = prep.signal.right_level_weights.topRows(1);
                    return s;
                }();
                SignalTensor tensor = exact_signal(diag, times);
                if (config.data_mode == TensorMode::shot)
                    tensor = shot_sample(tensor, config.shots_per_entry, rng::key({seed, 0x6e07u}));
                std::vector<double> centers = qmegs_run(tensor, mc);
                centers.resize(std::min(centers.size(), truth_centers.size()));
                const double err = error_metric(centers, truth_centers);
                csv << seed << ",qmegs," << t << ',' << mc.truncation * t << ','
                    << static_cast<double>(mc.sample_count) * mc.truncation * t << ',' << err << '\n';
            }
        }
        log << "seed " << seed << " done\n";
    }
    return 0;
}

int cmd_ancilla_check(const ExperimentConfig& config, double h, double grid_dt, std::ostream& log) {
    config.validate();
    if (h <= 0.0 || grid_dt <= 0.0) throw std::invalid_argument("need h > 0 and dt > 0");
    std::filesystem::create_directories(config.output_dir);
    const std::uint64_t seed = config.seeds.front();
    const PreparedExperiment prep = prepare_experiment(config, seed);
    const double t_max = config.qfames.truncation * config.qfames.filter_width;

    json pairs = json::array();
    for (int l = 0; l < prep.states.count(); ++l)
        for (int r = 0; r < prep.states.count(); ++r) {
            json entry;
            entry["l"] = l;
            entry["r"] = r;
            try {
                auto run_once = [&](double hh, double dd) {
                    const AncillaFreeProbe probe =
                        make_ancilla_free_probe(prep.signal, l, r, t_max, dd, hh);
                    const Reconstruction rec = ancilla_free_reconstruct(probe);
                    double max_err = 0.0, mean_err = 0.0;
                    for (Eigen::Index i = 0; i < rec.grid.size(); ++i) {
                        const cxd exact = prep.signal.value(rec.grid[i])(l, r);
                        const double e = std::abs(rec.values[i] - exact);
                        max_err = std::max(max_err, e);
                        mean_err += e;
                    }
                    mean_err /= static_cast<double>(rec.grid.size());
                    return std::pair<double, double>{max_err, mean_err};
                };
                const auto [e1, m1] = run_once(h, grid_dt);
                const auto [e2, m2] = run_once(h / 2.0, grid_dt / 2.0);
                entry["max_error"] = e1;
                entry["mean_error"] = m1;
                entry["max_error_halved"] = e2;
                entry["convergence_ratio"] = e2 > 0.0 ? e1 / e2 : 0.0;
            } catch (const zero_crossing_error& zc) {
                entry["zero_crossing_at"] = zc.time;
                log << "pair (" << l << "," << r << "): zero crossing at t = " << zc.time << "\n";
            }
            pairs.push_back(entry);
        }
    json doc;
    doc["h"] = h;
    doc["dt"] = grid_dt;
    doc["pairs"] = pairs;
    std::ofstream(config.output_dir / "reconstruction_report.json") << doc.dump(2) << '\n';
    return 0;
}

}  // namespace qfames
