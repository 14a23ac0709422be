#include "qfames/core.hpp"

#include "qfames/nufft.hpp"
#include "qfames/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qfames {

void QfamesConfig::validate() const {
    if (sample_count < 1) throw std::invalid_argument("sample count must be >= 1");
    if (filter_width <= 0.0) throw std::invalid_argument("filter width T must be positive");
    if (truncation <= 0.0) throw std::invalid_argument("truncation sigma must be positive");
    if (cluster_guess < 1) throw std::invalid_argument("cluster guess must be >= 1");
    if (svd_threshold < 0.0) throw std::invalid_argument("svd threshold must be >= 0");
    if (search_step <= 0.0) throw std::invalid_argument("search step q must be positive");
    if (block_param <= 0.0) throw std::invalid_argument("block parameter alpha must be positive");
    if (std::floor(2.0 * std::numbers::pi * filter_width / search_step) < 1.0)
        throw std::invalid_argument("search step q too large: empty grid");
}

MatrixXcd filtered_matrix(const SignalTensor& tensor, double theta) {
    if (tensor.data.empty()) throw std::invalid_argument("empty tensor");
    MatrixXcd g = MatrixXcd::Zero(tensor.left_count, tensor.right_count);
    const int n_samples = tensor.sample_count();
    for (int n = 0; n < n_samples; ++n) {
        const cxd ph = std::exp(cxd(0.0, theta * tensor.times.times[n]));
        for (int l = 0; l < tensor.left_count; ++l)
            for (int r = 0; r < tensor.right_count; ++r)
                g(l, r) += tensor.at(l, r, n) * ph;
    }
    return g / static_cast<double>(n_samples);
}

namespace {

Landscape landscape_grid(const SignalTensor& tensor, const QfamesConfig& config,
                         double theta0, Eigen::Index grid_count, LandscapeMethod method) {
    const int n_samples = tensor.sample_count();
    const int channels = tensor.left_count * tensor.right_count;
    Landscape scape;
    scape.theta0 = theta0;
    scape.step = config.grid_step();
    scape.filter_width = config.filter_width;
    scape.values = VectorXd::Zero(grid_count);

    if (method == LandscapeMethod::automatic) {
        const double direct_cost = static_cast<double>(grid_count) * n_samples * (channels + 1);
        method = direct_cost > 2e8 ? LandscapeMethod::nufft : LandscapeMethod::direct;
    }

    if (method == LandscapeMethod::nufft) {
        NufftPlan plan(tensor.times.times, theta0, scape.step, static_cast<std::size_t>(grid_count));
        std::vector<cxd> channel(n_samples), out(grid_count);
        for (int c = 0; c < channels; ++c) {
            const int l = c / tensor.right_count, r = c % tensor.right_count;
            for (int n = 0; n < n_samples; ++n) channel[n] = tensor.at(l, r, n);
            plan.transform(channel.data(), out.data());
            for (Eigen::Index j = 0; j < grid_count; ++j) scape.values[j] += std::norm(out[j]);
        }
    } else {
        // chunked direct contraction: phases by recurrence, product via GEMM
        Eigen::MatrixXcd zmat(channels, n_samples);
        for (int c = 0; c < channels; ++c)
            for (int n = 0; n < n_samples; ++n)
                zmat(c, n) = tensor.at(c / tensor.right_count, c % tensor.right_count, n);
        constexpr Eigen::Index kChunk = 2048;
        std::vector<double> partial(static_cast<std::size_t>(grid_count), 0.0);
        const Eigen::Index n_chunks = (grid_count + kChunk - 1) / kChunk;
        parallel_for(n_chunks, [&](std::int64_t clo, std::int64_t chi) {
            Eigen::MatrixXcd phases(n_samples, kChunk);
            Eigen::MatrixXcd prod(channels, kChunk);
            for (std::int64_t ci = clo; ci < chi; ++ci) {
                const Eigen::Index j0 = ci * kChunk;
                const Eigen::Index width = std::min<Eigen::Index>(kChunk, grid_count - j0);
                for (int n = 0; n < n_samples; ++n) {
                    const double t = tensor.times.times[n];
                    cxd ph = std::exp(cxd(0.0, (theta0 + scape.step * static_cast<double>(j0)) * t));
                    const cxd dph = std::exp(cxd(0.0, scape.step * t));
                    for (Eigen::Index j = 0; j < width; ++j) {
                        phases(n, j) = ph;
                        ph *= dph;
                    }
                }
                prod.leftCols(width).noalias() = zmat * phases.leftCols(width);
                for (Eigen::Index j = 0; j < width; ++j)
                    partial[static_cast<std::size_t>(j0 + j)] = prod.col(j).squaredNorm();
            }
        });
        for (Eigen::Index j = 0; j < grid_count; ++j) scape.values[j] = partial[static_cast<std::size_t>(j)];
    }
    const double inv_n = 1.0 / static_cast<double>(n_samples);
    for (Eigen::Index j = 0; j < grid_count; ++j)
        scape.values[j] = std::sqrt(scape.values[j]) * inv_n;
    return scape;
}

}  // namespace

Landscape landscape(const SignalTensor& tensor, const QfamesConfig& config, LandscapeMethod method) {
    config.validate();
    if (tensor.data.empty()) throw std::invalid_argument("empty tensor");
    const auto big_j = static_cast<Eigen::Index>(
        std::floor(2.0 * std::numbers::pi * config.filter_width / config.search_step));
    // grid includes j = 0 at theta = -pi
    return landscape_grid(tensor, config, -std::numbers::pi, big_j + 1, method);
}

Landscape landscape_window(const SignalTensor& tensor, const QfamesConfig& config,
                           double lo, double hi, LandscapeMethod method) {
    config.validate();
    if (!(lo < hi)) throw std::invalid_argument("empty landscape window");
    const double step = config.grid_step();
    const auto j_lo = static_cast<Eigen::Index>(std::ceil((lo + std::numbers::pi) / step));
    const auto j_hi = static_cast<Eigen::Index>(std::floor((hi + std::numbers::pi) / step));
    if (j_hi < j_lo) throw std::invalid_argument("landscape window contains no grid points");
    const double theta0 = -std::numbers::pi + step * static_cast<double>(j_lo);
    return landscape_grid(tensor, config, theta0, j_hi - j_lo + 1, method);
}

SearchResult search_and_block(const Landscape& scape, int count, double block_radius) {
    if (scape.size() == 0) throw std::invalid_argument("empty landscape");
    SearchResult result;
    std::vector<bool> blocked(static_cast<std::size_t>(scape.size()), false);
    for (int i = 0; i < count; ++i) {
        Eigen::Index best = -1;
        double best_val = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < scape.size(); ++j) {
            if (blocked[static_cast<std::size_t>(j)]) continue;
            if (scape.values[j] > best_val) {  // strict: ties go to the lowest theta
                best_val = scape.values[j];
                best = j;
            }
        }
        if (best < 0) {
            result.exhausted = true;
            break;
        }
        const double star = scape.theta(best);
        result.centers.push_back(star);
        for (Eigen::Index j = 0; j < scape.size(); ++j)
            if (std::abs(scape.theta(j) - star) < block_radius) blocked[static_cast<std::size_t>(j)] = true;
    }
    return result;
}

std::vector<ClusterEstimate> multiplicities(const SignalTensor& tensor,
                                            const std::vector<double>& centers, double tau,
                                            double block_radius) {
    if (tau < 0.0) throw std::invalid_argument("svd threshold must be >= 0");
    std::vector<ClusterEstimate> out;
    for (double star : centers) {
        const MatrixXcd g = filtered_matrix(tensor, star);
        if (!g.allFinite()) throw std::runtime_error("non-finite entries in filtered matrix");
        Eigen::JacobiSVD<MatrixXcd> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
        ClusterEstimate c;
        c.theta_star = star;
        c.singular_values = svd.singularValues();
        c.multiplicity = static_cast<int>(
            (c.singular_values.array() > tau).count());
        c.svd_left = svd.matrixU();
        c.svd_right = svd.matrixV();
        c.block_interval = {star - block_radius, star + block_radius};
        out.push_back(std::move(c));
    }
    return out;
}

DodsEstimate run_qfames(const SignalTensor& tensor, const QfamesConfig& config,
                        LandscapeMethod method) {
    config.validate();
    const Landscape scape = landscape(tensor, config, method);
    const SearchResult found = search_and_block(scape, config.cluster_guess, config.block_radius());
    const auto estimates =
        multiplicities(tensor, found.centers, config.svd_threshold, config.block_radius());
    DodsEstimate dods;
    dods.config = config;
    dods.search_exhausted = found.exhausted;
    for (const auto& c : estimates)
        (c.multiplicity > 0 ? dods.clusters : dods.discarded).push_back(c);
    std::sort(dods.clusters.begin(), dods.clusters.end(),
              [](const ClusterEstimate& a, const ClusterEstimate& b) { return a.theta_star < b.theta_star; });
    for (const auto& c : dods.clusters) dods.total_multiplicity += c.multiplicity;
    return dods;
}

DefaultParamsReport default_params(double gap_guess, double p_tail_guess, int left_count,
                                   int right_count, int dominant_guess) {
    if (gap_guess <= 0.0) throw std::invalid_argument("gap guess must be positive");
    DefaultParamsReport rep;
    QfamesConfig& c = rep.config;
    const double lr = static_cast<double>(left_count) * right_count;
    c.filter_width = std::max(10.0 / gap_guess, 1.0);
    c.truncation = 1.0;
    c.svd_threshold = std::max(2.0 * p_tail_guess, 0.1 * std::sqrt(lr));
    c.search_step = std::max(
        p_tail_guess / ((1.0 + c.truncation) * std::sqrt(std::max(1.0, dominant_guess * lr))), 1e-4);
    c.block_param =
        std::max(5.0, std::log(dominant_guess * lr / std::max(p_tail_guess, 1e-3)));
    c.cluster_guess = std::max(1, dominant_guess);
    rep.alpha_vs_gap_ok = c.block_param / c.filter_width < gap_guess;
    rep.notes = "T = max(10/gap, 1); tau = max(2 p_tail, 0.1 sqrt(LR)); "
                "q = max(p_tail/((1+sigma) sqrt(K L R)), 1e-4); "
                "alpha = max(5, log(K L R / max(p_tail, 1e-3)))";
    if (!rep.alpha_vs_gap_ok) rep.notes += "; warning: alpha/T >= gap guess";
    return rep;
}

WassersteinResult wasserstein1(const std::vector<WeightedAtom>& a,
                               const std::vector<WeightedAtom>& b) {
    auto expand = [](const std::vector<WeightedAtom>& atoms) {
        std::vector<double> xs;
        for (const auto& at : atoms) {
            if (at.multiplicity < 0) throw std::invalid_argument("negative multiplicity");
            xs.insert(xs.end(), static_cast<std::size_t>(at.multiplicity), at.position);
        }
        std::sort(xs.begin(), xs.end());
        return xs;
    };
    const auto xa = expand(a), xb = expand(b);
    WassersteinResult res;
    if (xa.size() != xb.size() || xa.empty()) {
        res.distance = std::numeric_limits<double>::infinity();
        res.mass_mismatch = true;
        return res;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < xa.size(); ++i) total += std::abs(xa[i] - xb[i]);
    res.distance = total / static_cast<double>(xa.size());
    return res;
}

WassersteinResult wasserstein1(const DodsEstimate& estimate, const std::vector<WeightedAtom>& exact) {
    std::vector<WeightedAtom> atoms;
    for (const auto& c : estimate.clusters) atoms.push_back({c.theta_star, c.multiplicity});
    return wasserstein1(atoms, exact);
}

}  // namespace qfames
