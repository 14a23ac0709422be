#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qfames {

/// How mass outside [-sigma*T, sigma*T] is handled when drawing evolution times.
///  - atom:     out-of-range draws are emitted as exact zeros (delta atom at 0)
///  - resample: out-of-range draws are rejected and redrawn (renormalized density)
/// Both keep the maximal runtime bounded by sigma*T.
enum class TruncationMode { atom, resample };

std::string to_string(TruncationMode mode);
TruncationMode truncation_mode_from_string(const std::string& name);

struct TimeSamples {
    std::vector<double> times;
    double filter_width = 0.0;  // T
    double truncation = 0.0;    // sigma
    std::uint64_t seed = 0;
    TruncationMode mode = TruncationMode::atom;

    int count() const { return static_cast<int>(times.size()); }
    void validate() const;  // |t| <= sigma*T, T > 0, sigma > 0
};

/// Draw N evolution times from the centered Gaussian of variance 2T^2
/// truncated at |t| <= sigma*T per the chosen mode. Deterministic per seed,
/// keyed per index (schedule independent).
TimeSamples sample_times(double filter_width, double truncation, int count,
                         std::uint64_t seed, TruncationMode mode = TruncationMode::atom);

/// Mass of the exact-zero atom, P(|s| > sigma*T) = erfc(sigma/2) (atom mode).
double zero_atom_probability(double truncation);

/// Fourier transform F(x) = int e^{ixt} a(t) dt of the truncated density
/// (real and even in x). Gauss-Legendre quadrature, accurate to ~1e-12;
/// approximates exp(-x^2 T^2) up to truncation error.
double truncated_gaussian_fourier(double x, double filter_width, double truncation,
                                  TruncationMode mode = TruncationMode::atom);

}  // namespace qfames
