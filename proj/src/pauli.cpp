#include "qfames/pauli.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfames {

namespace {

struct StringMasks {
    std::uint64_t x = 0;  // X or Y sites (bit flips)
    std::uint64_t z = 0;  // Z or Y sites (sign flips)
    int y_count = 0;
};

StringMasks masks_of(const PauliTerm& term) {
    StringMasks m;
    for (std::size_t i = 0; i < term.letters.size(); ++i) {
        switch (term.letters[i]) {
            case 'I': break;
            case 'X': m.x |= (1ULL << i); break;
            case 'Y': m.x |= (1ULL << i); m.z |= (1ULL << i); ++m.y_count; break;
            case 'Z': m.z |= (1ULL << i); break;
            default:
                throw std::invalid_argument("pauli letter must be one of I,X,Y,Z");
        }
    }
    return m;
}

// phase of P|s> = phase(s) |s ^ mx>:  i^{#Y} * (-1)^{popcount(s & mz)}
inline cxd source_phase(const StringMasks& m, std::uint64_t s) {
    static const cxd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cxd ph = ipow[m.y_count & 3];
    if (std::popcount(s & m.z) & 1) ph = -ph;
    return ph;
}

}  // namespace

bool terms_commute(const PauliTerm& a, const PauliTerm& b) {
    if (a.letters.size() != b.letters.size())
        throw std::invalid_argument("pauli strings of different length");
    int anti = 0;
    for (std::size_t i = 0; i < a.letters.size(); ++i) {
        const char ca = a.letters[i], cb = b.letters[i];
        if (ca != 'I' && cb != 'I' && ca != cb) ++anti;
    }
    return (anti & 1) == 0;
}

double PauliSumHamiltonian::coefficient_bound() const {
    if (dense_matrix) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(*dense_matrix, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    double b = 0.0;
    for (const auto& t : terms) b += std::abs(t.coefficient);
    return b;
}

void PauliSumHamiltonian::apply(const VectorXcd& in, VectorXcd& out) const {
    if (dense_matrix) {
        out.noalias() = (*dense_matrix) * in;
        return;
    }
    out.setZero(in.size());
    VectorXcd tmp(in.size());
    for (const auto& t : terms) {
        apply_pauli_string(t, in, tmp);
        out += t.coefficient * tmp;
    }
}

MatrixXcd PauliSumHamiltonian::to_dense() const {
    if (dense_matrix) return *dense_matrix;
    const Eigen::Index d = dim();
    if (d > (Eigen::Index{1} << 13))
        throw std::invalid_argument("dense realization limited to 2^13 dimensions");
    MatrixXcd h = MatrixXcd::Zero(d, d);
    VectorXcd e = VectorXcd::Zero(d), col(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        e[j] = 1.0;
        apply(e, col);
        h.col(j) = col;
        e[j] = 0.0;
    }
    return h;
}

void PauliSumHamiltonian::validate() const {
    if (norm_scale <= 0.0) throw std::invalid_argument("norm_scale must be positive");
    if (dense_matrix) {
        if (dense_matrix->rows() != dense_matrix->cols())
            throw std::invalid_argument("dense Hamiltonian must be square");
        if ((*dense_matrix - dense_matrix->adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("dense Hamiltonian must be Hermitian");
        return;
    }
    for (const auto& t : terms) {
        if (!std::isfinite(t.coefficient))
            throw std::invalid_argument("term coefficient must be finite");
        if (static_cast<int>(t.letters.size()) != n_qubits)
            throw std::invalid_argument("pauli string length must equal qubit count");
        masks_of(t);
    }
    if (all_commuting) {
        for (std::size_t i = 0; i < terms.size(); ++i)
            for (std::size_t j = i + 1; j < terms.size(); ++j)
                if (!terms_commute(terms[i], terms[j]))
                    throw std::invalid_argument("all_commuting set but terms do not commute");
    }
}

void apply_pauli_string(const PauliTerm& term, const VectorXcd& in, VectorXcd& out) {
    const StringMasks m = masks_of(term);
    const Eigen::Index d = in.size();
    out.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const std::uint64_t s = static_cast<std::uint64_t>(i) ^ m.x;
        out[i] = source_phase(m, s) * in[static_cast<Eigen::Index>(s)];
    }
}

void apply_pauli_rotation(const PauliTerm& term, double angle, VectorXcd& v) {
    const StringMasks m = masks_of(term);
    const double c = std::cos(angle), s = std::sin(angle);
    const cxd mis(0.0, -s);
    const Eigen::Index d = v.size();
    if (m.x == 0) {
        // diagonal string: pure phase per amplitude
        const cxd ph_plus = cxd(c, 0) + mis;   // exp(-i angle)
        const cxd ph_minus = cxd(c, 0) - mis;  // exp(+i angle)
        for (Eigen::Index i = 0; i < d; ++i)
            v[i] *= (std::popcount(static_cast<std::uint64_t>(i) & m.z) & 1) ? ph_minus : ph_plus;
        return;
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        const std::uint64_t si = static_cast<std::uint64_t>(i);
        const std::uint64_t j = si ^ m.x;
        if (j < si) continue;  // handle each pair once
        const cxd vi = v[i], vj = v[static_cast<Eigen::Index>(j)];
        // (P v)[i] = phase(j->i) v[j], source index is j = i ^ mx
        v[i] = c * vi + mis * (source_phase(m, j) * vj);
        v[static_cast<Eigen::Index>(j)] = c * vj + mis * (source_phase(m, si) * vi);
    }
}

void apply_pauli_imaginary(const PauliTerm& term, double w, VectorXcd& v) {
    const StringMasks m = masks_of(term);
    const double ch = std::cosh(w), sh = std::sinh(w);
    const Eigen::Index d = v.size();
    if (m.x == 0) {
        for (Eigen::Index i = 0; i < d; ++i)
            v[i] *= (std::popcount(static_cast<std::uint64_t>(i) & m.z) & 1) ? (ch - sh) : (ch + sh);
        return;
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        const std::uint64_t si = static_cast<std::uint64_t>(i);
        const std::uint64_t j = si ^ m.x;
        if (j < si) continue;
        const cxd vi = v[i], vj = v[static_cast<Eigen::Index>(j)];
        v[i] = ch * vi + sh * (source_phase(m, j) * vj);
        v[static_cast<Eigen::Index>(j)] = ch * vj + sh * (source_phase(m, si) * vi);
    }
}

IllustrativeModel build_illustrative() {
    IllustrativeModel model;
    MatrixXcd h = MatrixXcd::Zero(3, 3);
    h(2, 2) = 0.1;
    model.hamiltonian.n_qubits = 0;
    model.hamiltonian.dense_matrix = h;
    model.overlaps.resize(3, 3);
    model.overlaps << 1, 1, 1,
                      1, -1, 1,
                      1, 1, -1;
    model.overlaps /= std::sqrt(3.0);
    return model;
}

PauliSumHamiltonian build_tfim(int sites, double coupling) {
    if (sites < 1) throw std::invalid_argument("tfim needs at least one site");
    if (!std::isfinite(coupling)) throw std::invalid_argument("tfim coupling must be finite");
    PauliSumHamiltonian h;
    h.n_qubits = sites;
    for (int i = 0; i + 1 < sites; ++i) {
        PauliTerm t;
        t.coefficient = -1.0;
        t.letters.assign(sites, 'I');
        t.letters[i] = 'Z';
        t.letters[i + 1] = 'Z';
        h.terms.push_back(std::move(t));
    }
    for (int i = 0; i < sites; ++i) {
        PauliTerm t;
        t.coefficient = -coupling;
        t.letters.assign(sites, 'I');
        t.letters[i] = 'X';
        h.terms.push_back(std::move(t));
    }
    return h;
}

PauliSumHamiltonian build_toric(int rows, int cols, ToricBoundary boundary) {
    if (rows < 2 || cols < 2)
        throw std::invalid_argument("toric lattice needs rows, cols >= 2");
    PauliSumHamiltonian h;
    h.all_commuting = true;

    auto term = [&](char letter, const std::vector<int>& qubits) {
        PauliTerm t;
        t.coefficient = -1.0;
        t.letters.assign(h.n_qubits, 'I');
        for (int q : qubits) t.letters[q] = letter;
        h.terms.push_back(std::move(t));
    };

    if (boundary == ToricBoundary::torus) {
        // qubits: h(i,j) and v(i,j), i in [rows], j in [cols]
        const int n = 2 * rows * cols;
        if (n > 26) throw std::invalid_argument("toric torus size exceeds the supported qubit budget");
        h.n_qubits = n;
        auto he = [&](int i, int j) { return ((i % rows + rows) % rows) * cols + ((j % cols + cols) % cols); };
        auto ve = [&](int i, int j) { return rows * cols + he(i, j); };
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                term('X', {he(i, j), he(i, j - 1), ve(i, j), ve(i - 1, j)});
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                term('Z', {he(i, j), he(i + 1, j), ve(i, j), ve(i, j + 1)});
    } else {
        // cylinder: periodic along rows, smooth open boundaries along cols.
        // vertices (i, x), i in [rows], x in [0..cols]; vertical edges v(i,x)
        // wrap in i; horizontal edges f(i,x) connect column x to x+1.
        const int nv = rows * (cols + 1);  // vertical edges
        const int nf = rows * cols;        // horizontal edges
        if (nv + nf > 26) throw std::invalid_argument("toric cylinder size exceeds the supported qubit budget");
        h.n_qubits = nv + nf;
        auto ve = [&](int i, int x) { return ((i % rows + rows) % rows) * (cols + 1) + x; };
        auto fe = [&](int i, int x) { return nv + ((i % rows + rows) % rows) * cols + x; };
        for (int i = 0; i < rows; ++i)
            for (int x = 0; x <= cols; ++x) {
                std::vector<int> q = {ve(i, x), ve(i - 1, x)};
                if (x > 0) q.push_back(fe(i, x - 1));
                if (x < cols) q.push_back(fe(i, x));
                term('X', q);
            }
        for (int i = 0; i < rows; ++i)
            for (int x = 0; x < cols; ++x)
                term('Z', {fe(i, x), fe(i + 1, x), ve(i, x), ve(i, x + 1)});
    }
    h.validate();
    return h;
}

PauliSumHamiltonian normalize_spectrum(const PauliSumHamiltonian& h) {
    const double target = 0.9 * std::numbers::pi;
    const double bound = h.coefficient_bound();
    PauliSumHamiltonian out = h;
    if (bound <= target || bound == 0.0) return out;  // zero H: identity scaling
    const double s = target / bound;
    for (auto& t : out.terms) t.coefficient *= s;
    if (out.dense_matrix) *out.dense_matrix *= s;
    out.norm_scale = h.norm_scale * s;
    return out;
}

}  // namespace qfames
