#include "qfames/serialize.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <fstream>

namespace qfames {

namespace {

json complex_pairs(const cxd* data, std::size_t count) {
    json arr = json::array();
    for (std::size_t i = 0; i < count; ++i) arr.push_back({data[i].real(), data[i].imag()});
    return arr;
}

void read_complex_pairs(const json& arr, cxd* out, std::size_t count) {
    if (!arr.is_array() || arr.size() != count)
        throw std::invalid_argument("complex pair array has wrong length");
    for (std::size_t i = 0; i < count; ++i)
        out[i] = cxd(arr[i].at(0).get<double>(), arr[i].at(1).get<double>());
}

}  // namespace

json model_to_json(const PauliSumHamiltonian& h) {
    json doc;
    doc["n_qubits"] = h.n_qubits;
    doc["terms"] = json::array();
    for (const auto& t : h.terms) doc["terms"].push_back({{"coeff", t.coefficient}, {"paulis", t.letters}});
    doc["all_commuting"] = h.all_commuting;
    doc["norm_scale"] = h.norm_scale;
    if (h.dense_matrix) {
        doc["dense_dim"] = h.dense_matrix->rows();
        doc["dense"] = complex_pairs(h.dense_matrix->data(), h.dense_matrix->size());
    }
    return doc;
}

PauliSumHamiltonian model_from_json(const json& doc) {
    PauliSumHamiltonian h;
    h.n_qubits = doc.at("n_qubits").get<int>();
    for (const auto& t : doc.at("terms"))
        h.terms.push_back({t.at("coeff").get<double>(), t.at("paulis").get<std::string>()});
    h.all_commuting = doc.value("all_commuting", false);
    h.norm_scale = doc.value("norm_scale", 1.0);
    if (doc.contains("dense")) {
        const auto d = doc.at("dense_dim").get<Eigen::Index>();
        MatrixXcd m(d, d);
        read_complex_pairs(doc.at("dense"), m.data(), static_cast<std::size_t>(m.size()));
        // stored column-major via data(); symmetrize convention: we emit and
        // read through the same data() order, so round-trips are exact.
        h.dense_matrix = m;
    }
    h.validate();
    return h;
}

json matrix_to_json(const MatrixXcd& m) {
    json doc;
    doc["rows"] = m.rows();
    doc["cols"] = m.cols();
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back({m(i, j).real(), m(i, j).imag()});
    doc["data"] = arr;
    return doc;
}

MatrixXcd matrix_from_json(const json& doc) {
    const auto rows = doc.at("rows").get<Eigen::Index>();
    const auto cols = doc.at("cols").get<Eigen::Index>();
    const auto& arr = doc.at("data");
    if (arr.size() != static_cast<std::size_t>(rows * cols))
        throw std::invalid_argument("matrix data length mismatch");
    MatrixXcd m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j, ++k)
            m(i, j) = cxd(arr[k].at(0).get<double>(), arr[k].at(1).get<double>());
    return m;
}

json state_set_to_json(const StateSet& set) {
    json doc;
    doc["dim"] = set.dim();
    doc["labels"] = set.labels;
    json arr = json::array();
    for (const auto& s : set.states) arr.push_back(complex_pairs(s.data(), static_cast<std::size_t>(s.size())));
    doc["states"] = arr;
    return doc;
}

StateSet state_set_from_json(const json& doc) {
    StateSet set;
    const auto dim = doc.at("dim").get<Eigen::Index>();
    set.labels = doc.value("labels", std::vector<std::string>{});
    for (const auto& s : doc.at("states")) {
        VectorXcd v(dim);
        read_complex_pairs(s, v.data(), static_cast<std::size_t>(dim));
        set.states.push_back(std::move(v));
    }
    if (set.labels.size() != set.states.size()) set.labels.resize(set.states.size());
    set.validate();
    return set;
}

json dods_to_json(const DodsEstimate& dods) {
    json doc;
    auto cluster_json = [&](const ClusterEstimate& c) {
        json j;
        j["theta_star"] = c.theta_star;
        j["theta_star_physical"] = c.theta_star / dods.norm_scale;
        j["multiplicity"] = c.multiplicity;
        j["singular_values"] = std::vector<double>(c.singular_values.data(),
                                                   c.singular_values.data() + c.singular_values.size());
        j["block"] = {c.block_interval.first, c.block_interval.second};
        return j;
    };
    doc["clusters"] = json::array();
    for (const auto& c : dods.clusters) doc["clusters"].push_back(cluster_json(c));
    doc["discarded"] = json::array();
    for (const auto& c : dods.discarded) doc["discarded"].push_back(cluster_json(c));
    doc["total_multiplicity"] = dods.total_multiplicity;
    doc["search_exhausted"] = dods.search_exhausted;
    doc["norm_scale"] = dods.norm_scale;
    doc["config"] = {{"N", dods.config.sample_count},
                     {"T", dods.config.filter_width},
                     {"sigma", dods.config.truncation},
                     {"I_guess", dods.config.cluster_guess},
                     {"tau", dods.config.svd_threshold},
                     {"q", dods.config.search_step},
                     {"alpha", dods.config.block_param},
                     {"time_sampling", to_string(dods.config.time_sampling)},
                     {"seed", dods.config.seed}};
    return doc;
}

json observable_spectrum_to_json(const ObservableSpectrum& spec, double theta_star) {
    json doc;
    doc["theta_star"] = theta_star;
    doc["eigenvalues"] = std::vector<double>(spec.eigenvalues.data(),
                                             spec.eigenvalues.data() + spec.eigenvalues.size());
    doc["residual_imag"] = std::vector<double>(spec.residual_imag.data(),
                                               spec.residual_imag.data() + spec.residual_imag.size());
    doc["range"] = {spec.range.first, spec.range.second};
    doc["noisy"] = spec.noisy;
    return doc;
}

void save_tensor(const SignalTensor& tensor, const std::filesystem::path& prefix) {
    static_assert(std::endian::native == std::endian::little,
                  "tensor block format is little-endian");
    json head;
    head["shape"] = {tensor.left_count, tensor.right_count, tensor.sample_count()};
    head["mode"] = tensor.mode == TensorMode::exact ? "exact" : "shot";
    head["shots_per_entry"] = tensor.shots_per_entry;
    head["T"] = tensor.times.filter_width;
    head["sigma"] = tensor.times.truncation;
    head["seed"] = tensor.times.seed;
    head["time_sampling"] = to_string(tensor.times.mode);
    head["times"] = tensor.times.times;
    std::ofstream hj(prefix.string() + ".json");
    if (!hj) throw std::runtime_error("cannot write tensor header");
    hj << head.dump(2) << '\n';
    std::ofstream bin(prefix.string() + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot write tensor block");
    bin.write(reinterpret_cast<const char*>(tensor.data.data()),
              static_cast<std::streamsize>(tensor.data.size() * sizeof(cxd)));
}

SignalTensor load_tensor(const std::filesystem::path& prefix) {
    std::ifstream hj(prefix.string() + ".json");
    if (!hj) throw std::runtime_error("cannot read tensor header");
    json head = json::parse(hj);
    SignalTensor t;
    const auto shape = head.at("shape");
    t.left_count = shape.at(0).get<int>();
    t.right_count = shape.at(1).get<int>();
    const int n = shape.at(2).get<int>();
    const std::string mode = head.at("mode").get<std::string>();
    if (mode != "exact" && mode != "shot") throw std::invalid_argument("bad tensor mode: " + mode);
    t.mode = mode == "exact" ? TensorMode::exact : TensorMode::shot;
    t.shots_per_entry = head.value("shots_per_entry", 1);
    t.times.filter_width = head.at("T").get<double>();
    t.times.truncation = head.at("sigma").get<double>();
    t.times.seed = head.at("seed").get<std::uint64_t>();
    t.times.mode = truncation_mode_from_string(head.value("time_sampling", "atom"));
    t.times.times = head.at("times").get<std::vector<double>>();
    if (static_cast<int>(t.times.times.size()) != n)
        throw std::invalid_argument("tensor header shape does not match time samples");
    t.data.resize(static_cast<std::size_t>(t.left_count) * t.right_count * n);
    std::ifstream bin(prefix.string() + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot read tensor block");
    bin.read(reinterpret_cast<char*>(t.data.data()),
             static_cast<std::streamsize>(t.data.size() * sizeof(cxd)));
    if (static_cast<std::size_t>(bin.gcount()) != t.data.size() * sizeof(cxd))
        throw std::invalid_argument("tensor block truncated");
    t.validate();
    return t;
}

void write_landscape_csv(const Landscape& scape, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "theta,frobenius_norm\n";
    out.precision(17);
    for (Eigen::Index j = 0; j < scape.size(); ++j)
        out << scape.theta(j) << ',' << scape.values[j] << '\n';
}

void write_singular_values_csv(const std::vector<ClusterEstimate>& clusters,
                               const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "theta_star,rank_index,singular_value,above_threshold\n";
    out.precision(17);
    for (const auto& c : clusters)
        for (Eigen::Index i = 0; i < c.singular_values.size(); ++i)
            out << c.theta_star << ',' << i << ',' << c.singular_values[i] << ','
                << (i < c.multiplicity ? 1 : 0) << '\n';
}

}  // namespace qfames
