// eig4.cpp — cyclic Jacobi sweeps with complex plane rotations.

#include "dimer/eig4.hpp"

#include <cmath>

namespace dimer::kern {

namespace {

// One rotation zeroing a(p,q). The rotation mixes columns/rows p and q:
//   col_p' = c*col_p - s*conj(phi)*col_q
//   col_q' = s*phi*col_p + c*col_q
// with phi = a_pq/|a_pq| and the classic real-Jacobi (c, s) for the
// phase-stripped 2x2 block.
inline void rotate(Mat4& a, Mat4& v, int p, int q) noexcept {
    const cplx apq = a(p, q);
    const double m = std::abs(apq);
    if (m < 1e-300) return;
    const cplx phi = apq / m;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * m);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cplx sphi = s * phi;
    const cplx sphic = s * std::conj(phi);

    for (int k = 0; k < 4; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = c * akp - sphic * akq;
        a(k, q) = sphi * akp + c * akq;
    }
    for (int k = 0; k < 4; ++k) {
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k);
        a(p, k) = c * apk - sphi * aqk;
        a(q, k) = sphic * apk + c * aqk;
    }
    for (int k = 0; k < 4; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q);
        v(k, p) = c * vkp - sphic * vkq;
        v(k, q) = sphi * vkp + c * vkq;
    }
}

inline double offdiag_max(const Mat4& a) noexcept {
    double mx = 0.0;
    for (int p = 0; p < 3; ++p)
        for (int q = p + 1; q < 4; ++q) mx = std::max(mx, std::abs(a(p, q)));
    return mx;
}

}  // namespace

EigResult jacobi_hermitian(const Mat4& a_in) noexcept {
    Mat4 a;
    // symmetrize: rounding on input must not leak into the iteration
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = 0.5 * (a_in(i, j) + std::conj(a_in(j, i)));

    Mat4 v = Mat4::identity();
    double scale = 1.0;
    for (int i = 0; i < 4; ++i) scale = std::max(scale, std::abs(a(i, i).real()));
    scale = std::max(scale, offdiag_max(a));

    for (int sweep = 0; sweep < 40; ++sweep) {
        if (offdiag_max(a) <= 1e-15 * scale) break;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 4; ++q) rotate(a, v, p, q);
    }

    EigResult r;
    for (int i = 0; i < 4; ++i) r.w[static_cast<std::size_t>(i)] = a(i, i).real();
    r.v = v;
    return r;
}

double min_eigenvalue(const Mat4& a) noexcept {
    const EigResult e = jacobi_hermitian(a);
    double mn = e.w[0];
    for (int i = 1; i < 4; ++i) mn = std::min(mn, e.w[static_cast<std::size_t>(i)]);
    return mn;
}

double gershgorin_lower_bound(const Mat4& a) noexcept {
    double mn = 1e300;
    for (int i = 0; i < 4; ++i) {
        double radius = 0.0;
        for (int j = 0; j < 4; ++j)
            if (j != i) radius += std::abs(a(i, j));
        mn = std::min(mn, a(i, i).real() - radius);
    }
    return mn;
}

}  // namespace dimer::kern
