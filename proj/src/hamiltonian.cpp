// hamiltonian.cpp

#include "dimer/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dimer/eig4.hpp"
#include "dimer/errors.hpp"

namespace dimer {

void DimerParams::validate() const {
    auto bad = [](const std::string& what) { throw std::invalid_argument("DimerParams: " + what); };
    if (!(omega1 > 0.0)) bad("omega1 must be > 0");
    if (!(omega2 > 0.0)) bad("omega2 must be > 0");
    if (!(J >= 0.0)) bad("J must be >= 0");
    if (!(kappa1 >= 0.0)) bad("kappa1 must be >= 0");
    if (!(kappa2 >= 0.0)) bad("kappa2 must be >= 0");
    if (!(T1 > 0.0)) bad("T1 must be > 0");
    if (!(T2 > 0.0)) bad("T2 must be > 0");
}

Mat4 bare_hamiltonian(const DimerParams& p) {
    Mat4 h;
    h(kEE, kEE) = 0.5 * (p.omega1 + p.omega2);
    h(kEG, kEG) = 0.5 * (p.omega1 - p.omega2);
    h(kGE, kGE) = 0.5 * (p.omega2 - p.omega1);
    h(kGG, kGG) = -0.5 * (p.omega1 + p.omega2);
    h(kEG, kGE) = p.J;
    h(kGE, kEG) = p.J;
    return h;
}

Mat4 drive_hamiltonian(cplx drive) {
    Mat4 h;
    h(kEE, kGE) = drive;
    h(kEG, kGG) = drive;
    h(kGE, kEE) = std::conj(drive);
    h(kGG, kEG) = std::conj(drive);
    return h;
}

namespace {

// descending-sorted positions -> label slots: eps2, eps3, eps4, eps1
constexpr int kSlotOfDescending[4] = {1, 2, 3, 0};

int largest_component_row(const Mat4& v, int col) {
    int best = 0;
    double mag = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double a = std::abs(v(i, col));
        if (a > mag) {
            mag = a;
            best = i;
        }
    }
    return best;
}

}  // namespace

EigenFrame eigensystem(const Mat4& h, const EigenFrame* prev) {
    const double scale = std::max(1.0, kern::max_abs(h));
    if (kern::hermiticity_residual(h) > 1e-12 * scale)
        throw NotHermitian("eigensystem: input is not Hermitian within 1e-12");

    const kern::EigResult e = kern::jacobi_hermitian(h);

    // descending sort; ties broken by the bare index of the largest component,
    // so the lower label number takes the lower bare index
    std::array<int, 4> idx{0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const double wa = e.w[static_cast<std::size_t>(a)];
        const double wb = e.w[static_cast<std::size_t>(b)];
        if (std::abs(wa - wb) > 1e-12 * scale) return wa > wb;
        return largest_component_row(e.v, a) < largest_component_row(e.v, b);
    });

    EigenFrame f;
    for (int rank = 0; rank < 4; ++rank) {
        const int slot = kSlotOfDescending[rank];
        const int src = idx[static_cast<std::size_t>(rank)];
        f.eps[static_cast<std::size_t>(slot)] = e.w[static_cast<std::size_t>(src)];
        for (int i = 0; i < 4; ++i) f.u(i, slot) = e.v(i, src);
    }

    // gauge: largest-magnitude component real positive
    for (int k = 0; k < 4; ++k) {
        const int r = largest_component_row(f.u, k);
        const cplx z = f.u(r, k);
        const double m = std::abs(z);
        if (m > 0.0) {
            const cplx ph = std::conj(z) / m;
            for (int i = 0; i < 4; ++i) f.u(i, k) *= ph;
        }
    }

    // continuity: re-phase columns toward the previous frame
    if (prev != nullptr) {
        for (int k = 0; k < 4; ++k) {
            cplx ov = 0.0;
            for (int i = 0; i < 4; ++i) ov += std::conj(prev->u(i, k)) * f.u(i, k);
            const double m = std::abs(ov);
            if (m > 0.05) {
                const cplx ph = std::conj(ov) / m;
                for (int i = 0; i < 4; ++i) f.u(i, k) *= ph;
            }
        }
    }

    f.udag = kern::adjoint(f.u);
    auto [s1, s2] = s_coefficients(f.u);
    f.s1 = s1;
    f.s2 = s2;
    return f;
}

std::array<double, 4> closed_form_eigenvalues(const DimerParams& p, cplx drive) {
    const double e2 = std::norm(drive);
    const double a0 = std::sqrt(4.0 * e2 * (p.J * p.J + p.omega2 * p.omega2) +
                                (p.J * p.J - p.omega1 * p.omega2) * (p.J * p.J - p.omega1 * p.omega2));
    const double a1 = 2.0 * p.J * p.J + 4.0 * e2 + p.omega1 * p.omega1 + p.omega2 * p.omega2;
    double rad = a1 - 2.0 * a0;
    if (rad < -1e-12) throw NegativeRadicand("closed_form_eigenvalues: a1 - 2*a0 < -1e-12");
    rad = std::max(rad, 0.0);
    const double big = 0.5 * std::sqrt(a1 + 2.0 * a0);
    const double small = 0.5 * std::sqrt(rad);
    return {-big, big, small, -small};  // [eps1, eps2, eps3, eps4]
}

std::pair<Mat4, Mat4> s_coefficients(const Mat4& u) {
    static constexpr double z1[4] = {1.0, 1.0, -1.0, -1.0};
    static constexpr double z2[4] = {1.0, -1.0, 1.0, -1.0};
    Mat4 s1, s2;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            cplx a1 = 0.0, a2 = 0.0;
            for (int k = 0; k < 4; ++k) {
                const cplx t = std::conj(u(k, i)) * u(k, j);
                a1 += z1[k] * t;
                a2 += z2[k] * t;
            }
            s1(i, j) = a1;
            s2(i, j) = a2;
        }
    }
    return {s1, s2};
}

}  // namespace dimer
