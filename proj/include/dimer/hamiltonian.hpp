// hamiltonian.hpp — dimer Hamiltonian in the bare product basis, its
// instantaneous eigensystem, and the sigma_z coefficient matrices the
// dissipator is built from.
//
// Bare basis order everywhere: |ee>, |eg>, |ge>, |gg> (pigment 1 = donor
// first). Eigenlevels carry the labels eps2 >= eps3 >= eps4 >= eps1; arrays
// indexed by label-1, i.e. eps[0] is eps1.

#pragma once

#include <array>
#include <complex>

#include "dimer/kernels.hpp"

namespace dimer {

using kern::Mat4;
using kern::cplx;

struct DimerParams {
    double omega1 = 1.0;  // donor level splitting (calculation units)
    double omega2 = 1.0;  // acceptor level splitting
    double J = 1.5;       // pigment-pigment coupling
    double kappa1 = 0.1;  // donor-bath coupling rate
    double kappa2 = 0.1;  // acceptor-bath coupling rate
    double T1 = 0.1;      // donor bath temperature (k_B = 1)
    double T2 = 0.1;      // acceptor bath temperature

    // throws std::invalid_argument naming the violated constraint
    void validate() const;
};

enum BareIndex : int { kEE = 0, kEG = 1, kGE = 2, kGG = 3 };

// H1 + H2: level splittings plus J on the |eg><ge| block.
Mat4 bare_hamiltonian(const DimerParams& p);

// H3 = E sigma_+^(1) + conj(E) sigma_-^(1): couples |gg>-|eg> and |ge>-|ee>.
Mat4 drive_hamiltonian(cplx drive);

inline Mat4 full_hamiltonian(const DimerParams& p, cplx drive) {
    return kern::add(bare_hamiltonian(p), drive_hamiltonian(drive));
}

// Instantaneous eigensystem with the paper-ordered labels.
struct EigenFrame {
    std::array<double, 4> eps{};  // [eps1, eps2, eps3, eps4]
    Mat4 u;     // column k-1 = |eps_k> in bare coordinates; u diag(eps) u† = H
    Mat4 udag;
    Mat4 s1;    // sigma_z^(1) in the eigenbasis
    Mat4 s2;    // sigma_z^(2) in the eigenbasis

    // gap eps_i - eps_j between labels (1-based)
    double gap(int label_i, int label_j) const {
        return eps[static_cast<std::size_t>(label_i - 1)] - eps[static_cast<std::size_t>(label_j - 1)];
    }
    // the six nonnegative gaps in the order eps21, eps23, eps24, eps31, eps34, eps41
    std::array<double, 6> gaps() const {
        return {gap(2, 1), gap(2, 3), gap(2, 4), gap(3, 1), gap(3, 4), gap(4, 1)};
    }
};

// Diagonalize H (must be Hermitian to 1e-12 relative), label the spectrum
// eps2 >= eps3 >= eps4 >= eps1, fix each eigenvector's phase so its
// largest-magnitude component is real positive, and build s1/s2. Degenerate
// eigenvalues are ordered by the bare index of their largest component.
// When prev is given, column phases are re-aligned to maximize overlap with
// the previous frame (labels still follow the energy ordering).
EigenFrame eigensystem(const Mat4& h, const EigenFrame* prev = nullptr);

// The closed-form spectrum, returned in label storage order [eps1..eps4].
// Used as a test oracle; production always diagonalizes numerically.
std::array<double, 4> closed_form_eigenvalues(const DimerParams& p, cplx drive);

// s^(l)_ij from a transform u whose columns are eigenvectors in bare
// coordinates: s^(l) = u† sigma_z^(l)_bare u.
std::pair<Mat4, Mat4> s_coefficients(const Mat4& u);

}  // namespace dimer
