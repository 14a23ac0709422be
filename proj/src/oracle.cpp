#include "qfames/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qfames {

std::vector<WeightedAtom> GroundTruth::atoms() const {
    std::vector<WeightedAtom> out;
    for (const auto& c : clusters)
        for (double m : c.members) out.push_back({m, 1});
    return out;
}

GroundTruth brute_force_dods(const Spectrum& spectrum, const MatrixXcd& phi, const MatrixXcd& psi,
                             double c_p, double separation, double width) {
    if (phi.cols() != spectrum.size() || psi.cols() != spectrum.size())
        throw std::invalid_argument("overlap matrices must match the spectrum");
    if (c_p < 1.0) throw std::invalid_argument("dominance constant must be >= 1");
    const Eigen::Index m_total = spectrum.size();
    VectorXd p(m_total);
    double p_sum = 0.0;
    for (Eigen::Index m = 0; m < m_total; ++m) {
        p[m] = phi.col(m).norm() * psi.col(m).norm();
        p_sum += p[m];
    }
    // candidates with nonzero overlap, largest p first
    std::vector<int> order(m_total);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return p[a] > p[b]; });
    while (!order.empty() && p[order.back()] <= 0.0) order.pop_back();

    // largest prefix k with p_min(prefix) >= C_p * p_tail(rest)
    GroundTruth truth;
    double prefix_sum = 0.0;
    int best_k = 0;
    for (std::size_t k = 1; k <= order.size(); ++k) {
        prefix_sum += p[order[k - 1]];
        const double pmin = p[order[k - 1]];
        const double ptail = p_sum - prefix_sum;
        if (pmin >= c_p * ptail) best_k = static_cast<int>(k);
    }
    if (best_k == 0) {
        truth.dominance_found = false;
        truth.p_tail = p_sum;
        return truth;
    }
    truth.dominant.assign(order.begin(), order.begin() + best_k);
    std::sort(truth.dominant.begin(), truth.dominant.end());
    truth.p_tail = p_sum;
    for (int m : truth.dominant) truth.p_tail -= p[m];

    // single-linkage clustering of the dominant eigenvalues, break at gaps >= separation
    GroundTruthCluster cur;
    auto flush = [&](GroundTruthCluster&& c) {
        c.center = 0.5 * (c.members.front() + c.members.back());
        truth.clusters.push_back(std::move(c));
    };
    for (int m : truth.dominant) {
        const double lam = spectrum.eigenvalues[m];
        if (!cur.members.empty() && lam - cur.members.back() >= separation) {
            flush(std::move(cur));
            cur = GroundTruthCluster{};
        }
        cur.members.push_back(lam);
        cur.member_indices.push_back(m);
    }
    if (!cur.members.empty()) flush(std::move(cur));

    truth.realized_width = 0.0;
    for (const auto& c : truth.clusters) {
        truth.realized_width = std::max(truth.realized_width, c.width());
        if (c.width() > width)
            throw std::invalid_argument("cluster width exceeds the requested width bound;"
                                        " (separation, width) inconsistent for this spectrum");
    }
    truth.realized_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < truth.clusters.size(); ++i)
        truth.realized_separation =
            std::min(truth.realized_separation,
                     truth.clusters[i].members.front() - truth.clusters[i - 1].members.back());
    return truth;
}

namespace {

// symplectic GF(2) row: [x-mask | z-mask]
struct Gf2Row {
    std::uint64_t x = 0, z = 0;
    bool empty() const { return x == 0 && z == 0; }
};

Gf2Row row_of(const PauliTerm& t) {
    Gf2Row r;
    for (std::size_t i = 0; i < t.letters.size(); ++i) {
        const char c = t.letters[i];
        if (c == 'X' || c == 'Y') r.x |= (1ULL << i);
        if (c == 'Z' || c == 'Y') r.z |= (1ULL << i);
    }
    return r;
}

}  // namespace

int stabilizer_rank(const PauliSumHamiltonian& h) {
    if (!h.all_commuting) throw std::invalid_argument("stabilizer rank needs commuting terms");
    std::vector<Gf2Row> rows;
    for (const auto& t : h.terms) rows.push_back(row_of(t));
    int rank = 0;
    for (int bit = 0; bit < 2 * h.n_qubits; ++bit) {
        const bool xz = bit < h.n_qubits;
        const std::uint64_t mask = 1ULL << (xz ? bit : bit - h.n_qubits);
        auto get = [&](const Gf2Row& r) { return ((xz ? r.x : r.z) & mask) != 0; };
        int pivot = -1;
        for (int i = rank; i < static_cast<int>(rows.size()); ++i)
            if (get(rows[i])) { pivot = i; break; }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i)
            if (i != rank && get(rows[i])) {
                rows[i].x ^= rows[rank].x;
                rows[i].z ^= rows[rank].z;
            }
        ++rank;
    }
    return rank;
}

std::int64_t stabilizer_ground_degeneracy(const PauliSumHamiltonian& h) {
    for (const auto& t : h.terms)
        if (t.coefficient >= 0.0)
            throw std::invalid_argument("ground degeneracy rule assumes -1 coefficients");
    return std::int64_t{1} << (h.n_qubits - stabilizer_rank(h));
}

std::vector<double> qmegs_run(const SignalTensor& tensor, const QfamesConfig& config,
                              LandscapeMethod method) {
    if (tensor.left_count != 1 || tensor.right_count != 1)
        throw std::invalid_argument("qmegs baseline runs on a single (l, r) pair; restrict first");
    config.validate();
    const Landscape scape = landscape(tensor, config, method);
    return search_and_block(scape, config.cluster_guess, config.block_radius()).centers;
}

std::optional<NogoConstruction> nogo_construct(const MatrixXcd& phi, const MatrixXcd& psi) {
    if (phi.cols() != psi.cols()) throw std::invalid_argument("column counts differ");
    for (Eigen::Index l = 0; l < phi.rows(); ++l)
        if (std::abs(phi.row(l).norm() - 1.0) > 1e-8)
            throw std::invalid_argument("construction expects unit left rows (degenerate-only H)");
    for (Eigen::Index r = 0; r < psi.rows(); ++r)
        if (std::abs(psi.row(r).norm() - 1.0) > 1e-8)
            throw std::invalid_argument("construction expects unit right rows (degenerate-only H)");

    Eigen::JacobiSVD<MatrixXcd> svd(phi, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double tol = 1e-10 * std::max(1.0, sv.size() ? sv[0] : 0.0);
    int k = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > tol) ++k;
    if (k >= phi.cols()) return std::nullopt;  // full column rank: no construction

    const MatrixXcd pv = phi * svd.matrixV();
    const MatrixXcd qv = psi * svd.matrixV();
    NogoConstruction out;
    out.alternative_multiplicity = k;
    out.phi_alt = MatrixXcd::Zero(phi.rows(), k + 1);
    out.psi_alt = MatrixXcd::Zero(psi.rows(), k + 1);
    out.phi_alt.leftCols(k) = pv.leftCols(k);
    out.psi_alt.leftCols(k) = qv.leftCols(k);
    for (Eigen::Index r = 0; r < psi.rows(); ++r) {
        const double rest = 1.0 - out.psi_alt.row(r).head(k).squaredNorm();
        out.psi_alt(r, k) = std::sqrt(std::max(0.0, rest));
    }
    return out;
}

double error_metric(std::vector<double> estimated, std::vector<double> truth) {
    if (estimated.size() != truth.size()) return std::numeric_limits<double>::infinity();
    if (estimated.empty()) return 0.0;
    std::sort(estimated.begin(), estimated.end());
    std::sort(truth.begin(), truth.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        worst = std::max(worst, std::abs(estimated[i] - truth[i]));
    return worst;
}

}  // namespace qfames
