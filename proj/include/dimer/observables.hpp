// observables.hpp — acceptor probability, total-efficiency parameter, basis
// transforms and two-qubit concurrence, all pure functions of a density
// matrix (plus the eigenframe for transforms).

#pragma once

#include "dimer/hamiltonian.hpp"
#include "dimer/kernels.hpp"

namespace dimer {

enum class Basis { Eigen, Bare };

struct DensityState {
    Mat4 rho;
    Basis basis = Basis::Bare;
    double time = 0.0;
};

// sigma = u rho u† (eigen -> bare); throws BasisMismatch when rho is already bare
DensityState to_bare(const DensityState& rho_eigen, const EigenFrame& frame);
DensityState to_eigen(const DensityState& rho_bare, const EigenFrame& frame);

// P = sigma(ee,ee) + sigma(ge,ge); throws BasisMismatch unless bare
double acceptor_probability(const DensityState& sigma);

// eta_total = omega2 * P / pulse_energy; 0 before any energy arrived.
// No clamping: values above 1 are meaningful.
double total_efficiency(double p_acceptor, const DimerParams& params, double pulse_energy);

// Wootters concurrence of a bare-basis two-qubit density matrix.
double concurrence(const DensityState& sigma);
double concurrence(const Mat4& sigma_bare);

}  // namespace dimer
