#include "qfames/nufft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace qfames {

namespace {
constexpr int kHalfWidth = 14;  // spreading kernel half-width in grid cells
std::mutex fftw_plan_mutex;     // FFTW planner is not thread-safe
}

struct NufftPlan::Impl {
    std::size_t n_points;
    std::size_t fft_len;
    double dt;            // uniform t-grid spacing
    double tau;           // gaussian kernel variance
    double theta_center;
    std::vector<double> times;
    std::vector<std::complex<double>> center_phase;  // e^{i theta_c t_n}
    std::vector<long> base_cell;
    std::vector<double> kernel;  // (2*half+1) weights per point, flattened
    std::vector<std::complex<double>> pre_phase;     // e^{i xi0 k dt} on signed grid
    std::vector<double> deconvolve;                  // per output j
    fftw_plan plan;
    std::vector<std::complex<double>> work_in, work_out;
};

NufftPlan::NufftPlan(const std::vector<double>& t, double theta0, double step,
                     std::size_t grid_count)
    : impl_(new Impl), grid_count_(grid_count) {
    if (grid_count == 0 || step <= 0.0) throw std::invalid_argument("nufft: bad grid");
    Impl& im = *impl_;
    im.n_points = t.size();
    im.times = t;
    im.theta_center = theta0 + 0.5 * static_cast<double>(grid_count) * step;

    std::size_t m = 1;
    while (m < 2 * grid_count || m < 64) m *= 2;
    im.fft_len = m;
    im.dt = 2.0 * std::numbers::pi / (static_cast<double>(m) * step);
    im.tau = kHalfWidth * im.dt * im.dt / (3.0 * std::numbers::pi);

    im.center_phase.resize(im.n_points);
    im.base_cell.resize(im.n_points);
    im.kernel.resize(im.n_points * (2 * kHalfWidth + 1));
    for (std::size_t n = 0; n < im.n_points; ++n) {
        im.center_phase[n] = std::exp(std::complex<double>(0.0, im.theta_center * t[n]));
        const long k0 = static_cast<long>(std::floor(t[n] / im.dt));
        im.base_cell[n] = k0;
        for (int o = -kHalfWidth; o <= kHalfWidth; ++o) {
            const double diff = t[n] - static_cast<double>(k0 + o) * im.dt;
            im.kernel[n * (2 * kHalfWidth + 1) + (o + kHalfWidth)] =
                std::exp(-diff * diff / (4.0 * im.tau));
        }
    }

    const double xi0 = theta0 - im.theta_center;
    im.pre_phase.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double ks = (k > m / 2) ? static_cast<double>(k) - static_cast<double>(m)
                                      : static_cast<double>(k);
        im.pre_phase[k] = std::exp(std::complex<double>(0.0, xi0 * ks * im.dt));
    }
    im.deconvolve.resize(grid_count);
    const double amp = im.dt / std::sqrt(4.0 * std::numbers::pi * im.tau);
    for (std::size_t j = 0; j < grid_count; ++j) {
        const double xi = xi0 + static_cast<double>(j) * step;
        im.deconvolve[j] = amp * std::exp(xi * xi * im.tau);
    }

    im.work_in.resize(m);
    im.work_out.resize(m);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        im.plan = fftw_plan_dft_1d(static_cast<int>(m),
                                   reinterpret_cast<fftw_complex*>(im.work_in.data()),
                                   reinterpret_cast<fftw_complex*>(im.work_out.data()),
                                   FFTW_BACKWARD,  // sign +1: sum a_k e^{+2pi i jk/M}
                                   FFTW_ESTIMATE);
    }
    if (!im.plan) throw std::runtime_error("fftw plan creation failed");
}

NufftPlan::~NufftPlan() {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(impl_->plan);
    delete impl_;
}

void NufftPlan::transform(const std::complex<double>* values, std::complex<double>* out) const {
    Impl& im = *impl_;
    const std::size_t m = im.fft_len;
    std::fill(im.work_in.begin(), im.work_in.end(), std::complex<double>{});
    const long mask = static_cast<long>(m) - 1;  // m is a power of two
    for (std::size_t n = 0; n < im.n_points; ++n) {
        const std::complex<double> v = values[n] * im.center_phase[n];
        const double* kw = &im.kernel[n * (2 * kHalfWidth + 1)];
        const long base = im.base_cell[n];
        for (int o = -kHalfWidth; o <= kHalfWidth; ++o) {
            const std::size_t cell = static_cast<std::size_t>((base + o) & mask);
            im.work_in[cell] += v * kw[o + kHalfWidth];
        }
    }
    for (std::size_t k = 0; k < m; ++k) im.work_in[k] *= im.pre_phase[k];
    fftw_execute(im.plan);
    for (std::size_t j = 0; j < grid_count_; ++j) out[j] = im.work_out[j] * im.deconvolve[j];
}

}  // namespace qfames
