#include "qfames/ancilla_free.hpp"

#include <cmath>

namespace qfames {

AncillaFreeProbe make_ancilla_free_probe(const SpectralSignal& signal, int l, int r,
                                         double t_max, double grid_dt, double h) {
    if (grid_dt <= 0.0 || h <= 0.0) throw std::invalid_argument("probe needs grid_dt > 0, h > 0");
    if (l < 0 || l >= signal.left_count() || r < 0 || r >= signal.right_count())
        throw std::invalid_argument("probe pair out of range");
    AncillaFreeProbe probe;
    probe.h = h;
    probe.grid_dt = grid_dt;
    const auto half = static_cast<Eigen::Index>(std::llround(t_max / grid_dt));
    const Eigen::Index count = 2 * half + 1;
    probe.grid.resize(count);
    probe.magnitude.resize(count);
    probe.magnitude_minus.resize(count);
    probe.magnitude_plus.resize(count);

    // c_{psi,+-}^2 = <psi_r| e^{+-2hH} |psi_r> = sum_j e^{+-2h E_j} w_j
    double c2m = 0.0, c2p = 0.0;
    for (int j = 0; j < signal.level_count(); ++j) {
        const double w = signal.right_level_weights(r, j);
        c2m += std::exp(-2.0 * h * signal.energies[j]) * w;
        c2p += std::exp(+2.0 * h * signal.energies[j]) * w;
    }
    probe.c_minus = std::sqrt(c2m);
    probe.c_plus = std::sqrt(c2p);

    for (Eigen::Index i = 0; i < count; ++i) {
        const double t = grid_dt * static_cast<double>(i - half);
        probe.grid[i] = t;
        cxd z0{}, zm{}, zp{};
        for (int j = 0; j < signal.level_count(); ++j) {
            const cxd m = signal.level_overlaps[j](l, r);
            const cxd ph = std::exp(cxd(0.0, -signal.energies[j] * t));
            z0 += ph * m;
            // z(t - ih) = <phi| e^{-iHt} e^{-hH} |psi>, z(t + ih) with e^{+hH}
            zm += ph * std::exp(-h * signal.energies[j]) * m;
            zp += ph * std::exp(+h * signal.energies[j]) * m;
        }
        probe.magnitude[i] = std::abs(z0);
        probe.magnitude_minus[i] = std::abs(zm) / probe.c_minus;
        probe.magnitude_plus[i] = std::abs(zp) / probe.c_plus;
        if (i == half) probe.phase0 = std::arg(z0);
    }
    if (probe.magnitude[half] < 1e-8)
        throw zero_crossing_error(0.0, probe.magnitude[half]);
    return probe;
}

Reconstruction ancilla_free_reconstruct(const AncillaFreeProbe& probe) {
    const Eigen::Index count = probe.grid.size();
    const Eigen::Index center = (count - 1) / 2;
    for (Eigen::Index i = 0; i < count; ++i)
        if (probe.magnitude[i] < 1e-8)
            throw zero_crossing_error(probe.grid[i], probe.magnitude[i]);

    // derivative samples; the c factors re-enter through the logs
    VectorXd dphi(count);
    const double log_cm = std::log(probe.c_minus), log_cp = std::log(probe.c_plus);
    for (Eigen::Index i = 0; i < count; ++i) {
        const double lm = std::log(probe.magnitude_minus[i]) + log_cm;
        const double lp = std::log(probe.magnitude_plus[i]) + log_cp;
        dphi[i] = (lm - lp) / (2.0 * probe.h);
    }

    VectorXd phase(count);
    phase[center] = probe.phase0;
    for (Eigen::Index i = center + 1; i < count; ++i)
        phase[i] = phase[i - 1] + 0.5 * (dphi[i - 1] + dphi[i]) * probe.grid_dt;
    for (Eigen::Index i = center - 1; i >= 0; --i)
        phase[i] = phase[i + 1] - 0.5 * (dphi[i + 1] + dphi[i]) * probe.grid_dt;

    Reconstruction rec;
    rec.grid = probe.grid;
    rec.values.resize(count);
    for (Eigen::Index i = 0; i < count; ++i)
        rec.values[i] = probe.magnitude[i] * std::exp(cxd(0.0, phase[i]));
    return rec;
}

}  // namespace qfames
