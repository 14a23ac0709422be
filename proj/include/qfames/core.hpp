#pragma once

#include "qfames/signal.hpp"

#include <optional>

namespace qfames {

/// Algorithm-1 preparation block.
struct QfamesConfig {
    int sample_count = 2000;      // N
    double filter_width = 40.0;   // T
    double truncation = 1.0;      // sigma
    int cluster_guess = 2;        // I~ (guessed number of distinct dominant eigenvalues)
    double svd_threshold = 0.3;   // tau
    double search_step = 0.005;   // q; grid spacing is q / T
    double block_param = 5.0;     // alpha; block interval has total length alpha / T

    TruncationMode time_sampling = TruncationMode::resample;
    std::uint64_t seed = 1;

    /// Half-width of the blocked interval around a found peak.
    double block_radius() const { return block_param / (2.0 * filter_width); }
    double grid_step() const { return search_step / filter_width; }
    void validate() const;
};

/// G(theta) = (1/N) sum_n Z_n e^{i theta t_n}, direct contraction.
MatrixXcd filtered_matrix(const SignalTensor& tensor, double theta);

/// ||G(theta_j)||_F over the grid theta_j = -pi + j q/T, j = 0..J, J = floor(2 pi T / q).
struct Landscape {
    double theta0 = 0.0;
    double step = 0.0;
    VectorXd values;  // W_j
    double filter_width = 0.0;

    Eigen::Index size() const { return values.size(); }
    double theta(Eigen::Index j) const { return theta0 + step * static_cast<double>(j); }
};

/// Evaluation strategy: direct chunked contraction or the NUFFT fast path.
/// `automatic` picks by a deterministic cost heuristic.
enum class LandscapeMethod { automatic, direct, nufft };

Landscape landscape(const SignalTensor& tensor, const QfamesConfig& config,
                    LandscapeMethod method = LandscapeMethod::automatic);

/// Landscape restricted to a window [lo, hi] (same grid geometry, clipped).
Landscape landscape_window(const SignalTensor& tensor, const QfamesConfig& config,
                           double lo, double hi, LandscapeMethod method = LandscapeMethod::automatic);

struct SearchResult {
    std::vector<double> centers;  // in discovery order (descending peak height)
    bool exhausted = false;       // fewer than requested before grid ran out
};

/// Iterative argmax with open-interval blocking; ties break to the lowest theta.
SearchResult search_and_block(const Landscape& scape, int count, double block_radius);

struct ClusterEstimate {
    double theta_star = 0.0;
    int multiplicity = 0;
    VectorXd singular_values;  // descending
    MatrixXcd svd_left;        // U, thin
    MatrixXcd svd_right;       // V, thin
    std::pair<double, double> block_interval{0.0, 0.0};
};

/// SVD of G(theta*) per candidate; multiplicity = #(singular values > tau).
std::vector<ClusterEstimate> multiplicities(const SignalTensor& tensor,
                                            const std::vector<double>& centers, double tau,
                                            double block_radius);

/// The assembled density-of-dominant-eigenstates estimate.
struct DodsEstimate {
    std::vector<ClusterEstimate> clusters;   // multiplicity > 0, sorted by theta
    std::vector<ClusterEstimate> discarded;  // multiplicity = 0 candidates
    QfamesConfig config;
    bool search_exhausted = false;
    int total_multiplicity = 0;
    double norm_scale = 1.0;
};

/// Stages I-II end to end: landscape -> search-and-block -> multiplicities.
DodsEstimate run_qfames(const SignalTensor& tensor, const QfamesConfig& config,
                        LandscapeMethod method = LandscapeMethod::automatic);

/// Heuristic defaults instantiating the analysis-side parameter conditions.
struct DefaultParamsReport {
    QfamesConfig config;
    bool alpha_vs_gap_ok = true;  // alpha/T < Delta_guess
    std::string notes;
};
DefaultParamsReport default_params(double gap_guess, double p_tail_guess, int left_count,
                                   int right_count, int dominant_guess);

/// Atom of a point measure on the line with integer mass.
struct WeightedAtom {
    double position = 0.0;
    int multiplicity = 0;
};

/// Exact 1-Wasserstein distance between two normalized atomic measures
/// (sorted matching). Mass mismatch reports infinity.
struct WassersteinResult {
    double distance = 0.0;
    bool mass_mismatch = false;
};
WassersteinResult wasserstein1(const std::vector<WeightedAtom>& a,
                               const std::vector<WeightedAtom>& b);
WassersteinResult wasserstein1(const DodsEstimate& estimate, const std::vector<WeightedAtom>& exact);

}  // namespace qfames
