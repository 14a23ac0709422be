#pragma once

#include "qfames/spectrum.hpp"

#include <memory>

namespace qfames {

/// Realizes exp(-iHt) (and exp(-beta H)) on statevectors.
///  - dense_eigen: via a full Spectrum, dims <= 2^13
///  - commuting_product: exact per-term product, requires all_commuting
///  - krylov: Lanczos exponential action, restarted by time-splitting
struct EvolutionBackend {
    enum class Kind { dense_eigen, commuting_product, krylov };
    Kind kind = Kind::dense_eigen;
    std::shared_ptr<const Spectrum> spectrum;  // dense_eigen only
    double tolerance = 1e-10;                  // krylov relative residual
    int max_subspace = 40;                     // krylov
};

EvolutionBackend make_dense_backend(const PauliSumHamiltonian& h);
EvolutionBackend make_commuting_backend(const PauliSumHamiltonian& h);
EvolutionBackend make_krylov_backend(double tolerance = 1e-10, int max_subspace = 40);

/// exp(-iHt) |state>; norm preserved to 1e-8.
VectorXcd evolve(const PauliSumHamiltonian& h, const EvolutionBackend& backend,
                 const VectorXcd& state, double t);

struct ImaginaryEvolved {
    VectorXcd state;    // normalized
    double weight = 1;  // ||exp(-beta H) psi|| for normalized input psi
};

/// exp(-beta H)|state> / norm, with the norm reported (houses c_{psi,+-}).
ImaginaryEvolved imaginary_evolve(const PauliSumHamiltonian& h, const EvolutionBackend& backend,
                                  const VectorXcd& state, double beta);

}  // namespace qfames
