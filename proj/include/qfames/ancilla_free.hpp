#pragma once

#include "qfames/spectral_signal.hpp"

#include <stdexcept>

namespace qfames {

/// |Z(t)| hit zero somewhere on the grid; the log-magnitude phase relation is
/// undefined there.
class zero_crossing_error : public std::runtime_error {
public:
    zero_crossing_error(double t, double magnitude)
        : std::runtime_error("signal magnitude " + std::to_string(magnitude) +
                             " below threshold at t = " + std::to_string(t)),
          time(t) {}
    double time;
};

/// Magnitude-only data for one (l, r) pair on a symmetric uniform grid, as the
/// measurement circuits would provide it: r(t) from the direct circuit and
/// r(t -+ ih)/c_{psi,-+} from the imaginary-shifted ones, with the
/// normalization factors c_{psi,+-} = sqrt(<psi_r| e^{+-2hH} |psi_r>).
struct AncillaFreeProbe {
    double h = 0.0;        // imaginary displacement
    double grid_dt = 0.0;  // integration step
    VectorXd grid;         // symmetric: -t_max .. t_max, center at index (n-1)/2
    VectorXd magnitude;          // r(t_j)
    VectorXd magnitude_minus;    // r(t_j - ih) / c_minus   (measured form)
    VectorXd magnitude_plus;     // r(t_j + ih) / c_plus
    double c_minus = 1.0;
    double c_plus = 1.0;
    double phase0 = 0.0;   // arg <phi_l|psi_r>
};

/// Generate the probe from the model for the (l, r) pair.
AncillaFreeProbe make_ancilla_free_probe(const SpectralSignal& signal, int l, int r,
                                         double t_max, double grid_dt, double h);

struct Reconstruction {
    VectorXd grid;
    VectorXcd values;  // r(t) e^{i phi(t)}
};

/// Cauchy-Riemann phase recovery: integrate
///   dphi/dt = (1/2h) [ln r(t-ih) - ln r(t+ih)]
/// by the trapezoid rule outward from phi(0) = phase0. Throws
/// zero_crossing_error when r(t) < 1e-8 on the grid.
Reconstruction ancilla_free_reconstruct(const AncillaFreeProbe& probe);

}  // namespace qfames
