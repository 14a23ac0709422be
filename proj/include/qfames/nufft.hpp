#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qfames {

/// Type-1 NUFFT: for each channel c, evaluates
///   G_c(theta_j) = sum_n values[c][n] * exp(i * theta_j * t[n]),
/// theta_j = theta0 + j*step, j = 0..grid_count-1, exactly to ~1e-12 via
/// Gaussian gridding (oversampling 2, half-width 14) with a baseband shift
/// around the window center. channels are (count, n) row-major.
class NufftPlan {
public:
    NufftPlan(const std::vector<double>& t, double theta0, double step, std::size_t grid_count);
    ~NufftPlan();
    NufftPlan(const NufftPlan&) = delete;
    NufftPlan& operator=(const NufftPlan&) = delete;

    /// One channel: returns G on the grid (no 1/N factor). Uses internal work
    /// buffers; not safe to call concurrently on one plan.
    void transform(const std::complex<double>* values, std::complex<double>* out) const;

    std::size_t grid_count() const { return grid_count_; }

private:
    struct Impl;
    Impl* impl_;
    std::size_t grid_count_;
};

}  // namespace qfames
