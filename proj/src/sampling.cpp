#include "qfames/sampling.hpp"

#include "qfames/parallel.hpp"
#include "qfames/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfames {

std::string to_string(TruncationMode mode) {
    return mode == TruncationMode::atom ? "atom" : "resample";
}

TruncationMode truncation_mode_from_string(const std::string& name) {
    if (name == "atom") return TruncationMode::atom;
    if (name == "resample") return TruncationMode::resample;
    throw std::invalid_argument("unknown time sampling mode: " + name);
}

void TimeSamples::validate() const {
    if (filter_width <= 0.0 || truncation <= 0.0)
        throw std::invalid_argument("filter width and truncation must be positive");
    const double bound = truncation * filter_width * (1.0 + 1e-12);
    for (double t : times)
        if (std::abs(t) > bound)
            throw std::invalid_argument("time sample exceeds sigma*T");
}

TimeSamples sample_times(double filter_width, double truncation, int count,
                         std::uint64_t seed, TruncationMode mode) {
    if (filter_width <= 0.0 || truncation <= 0.0 || count < 1)
        throw std::invalid_argument("sample_times: need T > 0, sigma > 0, N >= 1");
    TimeSamples ts;
    ts.filter_width = filter_width;
    ts.truncation = truncation;
    ts.seed = seed;
    ts.mode = mode;
    ts.times.resize(count);
    const double stddev = std::sqrt(2.0) * filter_width;
    const double bound = truncation * filter_width;
    parallel_for(count, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t n = lo; n < hi; ++n) {
            double value = 0.0;
            for (std::uint64_t attempt = 0;; ++attempt) {
                auto [g, _] = rng::gaussian_pair(rng::key(
                    {seed, 0x715eu, static_cast<std::uint64_t>(n), attempt}));
                const double s = stddev * g;
                if (std::abs(s) <= bound) { value = s; break; }
                if (mode == TruncationMode::atom) { value = 0.0; break; }
            }
            ts.times[static_cast<std::size_t>(n)] = value;
        }
    });
    return ts;
}

double zero_atom_probability(double truncation) {
    return std::erfc(truncation / 2.0);
}

namespace {

// 64-point Gauss-Legendre nodes/weights on [-1, 1], by Newton iteration.
struct GaussLegendre64 {
    double node[64];
    double weight[64];
    GaussLegendre64() {
        const int n = 64;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            node[i] = x;
            weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

// int_{-a}^{a} cos(x t) (1/(2T sqrt(pi))) exp(-t^2/4T^2) dt, panel-wise 64-pt GL
double interval_transform(double x, double filter_width, double a) {
    static const GaussLegendre64 gl;
    const double norm = 1.0 / (2.0 * filter_width * std::sqrt(std::numbers::pi));
    // even integrand: 2 * int_0^a; panels sized to resolve the oscillation
    const int panels = std::max(2, static_cast<int>(std::ceil(std::abs(x) * a / 3.0)) + 2);
    double total = 0.0;
    const double h = a / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = p * h, mid = lo + 0.5 * h, half = 0.5 * h;
        double acc = 0.0;
        for (int i = 0; i < 64; ++i) {
            const double t = mid + half * gl.node[i];
            acc += gl.weight[i] * std::cos(x * t) * std::exp(-t * t / (4.0 * filter_width * filter_width));
        }
        total += acc * half;
    }
    return 2.0 * norm * total;
}

}  // namespace

double truncated_gaussian_fourier(double x, double filter_width, double truncation,
                                  TruncationMode mode) {
    const double a = truncation * filter_width;
    const double body = interval_transform(x, filter_width, a);
    if (mode == TruncationMode::atom)
        return zero_atom_probability(truncation) + body;
    return body / std::erf(truncation / 2.0);
}

}  // namespace qfames
