// kernels.hpp — 4x4 complex matrix type and the arithmetic kernels behind the
// integrator hot loop. Scalar reference implementations always exist; an AVX2
// variant is selected at runtime when the CPU supports it. Both backends are
// equivalence-tested against each other.

#pragma once

#include <array>
#include <complex>
#include <cstddef>

namespace dimer::kern {

using cplx = std::complex<double>;

// Row-major 4x4 complex matrix. 32 doubles, interleaved re/im, 32-byte aligned
// so vector loads never split cache lines.
struct alignas(32) Mat4 {
    std::array<cplx, 16> m{};

    cplx& operator()(int r, int c) noexcept { return m[static_cast<std::size_t>(r * 4 + c)]; }
    const cplx& operator()(int r, int c) const noexcept { return m[static_cast<std::size_t>(r * 4 + c)]; }

    double* d() noexcept { return reinterpret_cast<double*>(m.data()); }
    const double* d() const noexcept { return reinterpret_cast<const double*>(m.data()); }

    static Mat4 zero() noexcept { return Mat4{}; }
    static Mat4 identity() noexcept {
        Mat4 r;
        for (int i = 0; i < 4; ++i) r(i, i) = 1.0;
        return r;
    }
    static Mat4 diag(double a, double b, double c, double d) noexcept {
        Mat4 r;
        r(0, 0) = a; r(1, 1) = b; r(2, 2) = c; r(3, 3) = d;
        return r;
    }
};

// Kernel table. Every entry computes the same thing in every backend.
struct Ops {
    const char* name;
    // out = a * b
    void (*matmul)(Mat4& out, const Mat4& a, const Mat4& b);
    // out = -i (h*r - r*h)
    void (*minus_i_commutator)(Mat4& out, const Mat4& h, const Mat4& r);
    // out = a + s*b, real s (RK4 stage preparation)
    void (*lincomb)(Mat4& out, const Mat4& a, double s, const Mat4& b);
    // acc += (h/6) (k1 + 2 k2 + 2 k3 + k4)
    void (*rk4_update)(Mat4& acc, const Mat4& k1, const Mat4& k2, const Mat4& k3, const Mat4& k4, double h);
};

enum class Backend { Auto, Scalar, Avx2 };

// Active kernel table. Resolved once: DIMER_KERNELS=scalar|avx2 overrides,
// otherwise AVX2 when the CPU has it, scalar else.
const Ops& ops() noexcept;

const Ops& scalar_ops() noexcept;
const Ops* avx2_ops() noexcept;  // nullptr when not built or CPU lacks AVX2+FMA
bool select_backend(Backend b) noexcept;  // false if unavailable
Backend active_backend() noexcept;

// ---- derived operations (shared across backends) ----

inline Mat4 matmul(const Mat4& a, const Mat4& b) {
    Mat4 r;
    ops().matmul(r, a, b);
    return r;
}

inline Mat4 adjoint(const Mat4& a) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = std::conj(a(j, i));
    return r;
}

inline cplx trace(const Mat4& a) noexcept { return a(0, 0) + a(1, 1) + a(2, 2) + a(3, 3); }

inline Mat4 add(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) r.m[static_cast<std::size_t>(i)] = a.m[static_cast<std::size_t>(i)] + b.m[static_cast<std::size_t>(i)];
    return r;
}

inline Mat4 sub(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) r.m[static_cast<std::size_t>(i)] = a.m[static_cast<std::size_t>(i)] - b.m[static_cast<std::size_t>(i)];
    return r;
}

inline Mat4 scale(cplx s, const Mat4& a) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) r.m[static_cast<std::size_t>(i)] = s * a.m[static_cast<std::size_t>(i)];
    return r;
}

// u† a u
inline Mat4 conj_similarity(const Mat4& u, const Mat4& a) {
    Mat4 t;
    ops().matmul(t, a, u);
    Mat4 r;
    ops().matmul(r, adjoint(u), t);
    return r;
}

// u a u†
inline Mat4 similarity(const Mat4& u, const Mat4& a) {
    Mat4 t;
    ops().matmul(t, a, adjoint(u));
    Mat4 r;
    ops().matmul(r, u, t);
    return r;
}

inline double max_abs(const Mat4& a) noexcept {
    double mx = 0.0;
    for (const auto& z : a.m) mx = std::max(mx, std::abs(z));
    return mx;
}

// max |a_ij - conj(a_ji)|
inline double hermiticity_residual(const Mat4& a) noexcept {
    double mx = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) mx = std::max(mx, std::abs(a(i, j) - std::conj(a(j, i))));
    return mx;
}

inline double max_abs_diff(const Mat4& a, const Mat4& b) noexcept {
    double mx = 0.0;
    for (int i = 0; i < 16; ++i)
        mx = std::max(mx, std::abs(a.m[static_cast<std::size_t>(i)] - b.m[static_cast<std::size_t>(i)]));
    return mx;
}

}  // namespace dimer::kern
