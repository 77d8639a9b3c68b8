// observables.cpp

#include "dimer/observables.hpp"

#include <algorithm>
#include <cmath>

#include "dimer/eig4.hpp"
#include "dimer/errors.hpp"

namespace dimer {

DensityState to_bare(const DensityState& rho_eigen, const EigenFrame& frame) {
    if (rho_eigen.basis != Basis::Eigen) throw BasisMismatch("to_bare: state is not in the eigenbasis");
    DensityState out;
    out.rho = kern::similarity(frame.u, rho_eigen.rho);
    out.basis = Basis::Bare;
    out.time = rho_eigen.time;
    return out;
}

DensityState to_eigen(const DensityState& rho_bare, const EigenFrame& frame) {
    if (rho_bare.basis != Basis::Bare) throw BasisMismatch("to_eigen: state is not in the bare basis");
    DensityState out;
    out.rho = kern::conj_similarity(frame.u, rho_bare.rho);
    out.basis = Basis::Eigen;
    out.time = rho_bare.time;
    return out;
}

double acceptor_probability(const DensityState& sigma) {
    if (sigma.basis != Basis::Bare) throw BasisMismatch("acceptor_probability: state is not in the bare basis");
    return sigma.rho(kEE, kEE).real() + sigma.rho(kGE, kGE).real();
}

double total_efficiency(double p_acceptor, const DimerParams& params, double pulse_energy) {
    if (pulse_energy < 1e-15) return 0.0;
    return params.omega2 * p_acceptor / pulse_energy;
}

namespace {

// (sigma_y x sigma_y), a real matrix in the bare product basis
const Mat4& spin_flip() {
    static const Mat4 f = [] {
        Mat4 m;
        m(0, 3) = -1.0;
        m(1, 2) = 1.0;
        m(2, 1) = 1.0;
        m(3, 0) = -1.0;
        return m;
    }();
    return f;
}

Mat4 conj_elementwise(const Mat4& a) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) r.m[static_cast<std::size_t>(i)] = std::conj(a.m[static_cast<std::size_t>(i)]);
    return r;
}

// Hermitian PSD square root via diagonalization, negative noise clamped
Mat4 psd_sqrt(const Mat4& a) {
    const kern::EigResult e = kern::jacobi_hermitian(a);
    Mat4 r;
    for (int i = 0; i < 4; ++i) {
        const double w = std::sqrt(std::max(e.w[static_cast<std::size_t>(i)], 0.0));
        for (int r1 = 0; r1 < 4; ++r1)
            for (int c = 0; c < 4; ++c) r(r1, c) += w * e.v(r1, i) * std::conj(e.v(c, i));
    }
    return r;
}

}  // namespace

double concurrence(const Mat4& sigma_bare) {
    // rho_tilde = (sy x sy) conj(rho) (sy x sy); the lambda_i are the square
    // roots of the eigenvalues of rho*rho_tilde, obtained here from the
    // Hermitian similar matrix sqrt(rho) rho_tilde sqrt(rho).
    const Mat4& f = spin_flip();
    const Mat4 rho_tilde = kern::matmul(f, kern::matmul(conj_elementwise(sigma_bare), f));
    const Mat4 root = psd_sqrt(sigma_bare);
    const Mat4 herm = kern::matmul(root, kern::matmul(rho_tilde, root));
    kern::EigResult e = kern::jacobi_hermitian(herm);
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) lam[static_cast<std::size_t>(i)] = std::sqrt(std::max(e.w[static_cast<std::size_t>(i)], 0.0));
    std::sort(lam.begin(), lam.end(), std::greater<>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double concurrence(const DensityState& sigma) {
    if (sigma.basis != Basis::Bare) throw BasisMismatch("concurrence: state is not in the bare basis");
    return concurrence(sigma.rho);
}

}  // namespace dimer
