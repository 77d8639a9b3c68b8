// eig4.hpp — cyclic Jacobi eigensolver for 4x4 Hermitian matrices.
// More than enough accuracy at this size (residuals ~1e-14) and cheap enough
// to run at every integrator stage.

#pragma once

#include <array>

#include "dimer/kernels.hpp"

namespace dimer::kern {

struct EigResult {
    std::array<double, 4> w;  // eigenvalues, unsorted (diagonal after sweeps)
    Mat4 v;                   // columns are the matching eigenvectors
};

// Diagonalizes (a + a†)/2 implicitly; caller is responsible for checking
// Hermiticity when that matters.
EigResult jacobi_hermitian(const Mat4& a) noexcept;

// Smallest eigenvalue only (same sweeps, no early exit tricks).
double min_eigenvalue(const Mat4& a) noexcept;

// Gershgorin lower bound on the spectrum; cheap positivity prefilter.
double gershgorin_lower_bound(const Mat4& a) noexcept;

}  // namespace dimer::kern
