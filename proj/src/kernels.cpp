// kernels.cpp — scalar reference kernels and backend dispatch.

#include "dimer/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace dimer::kern {

namespace {

void matmul_scalar(Mat4& out, const Mat4& a, const Mat4& b) {
    Mat4 r;  // allow out to alias a or b
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += a(i, k) * b(k, j);
            r(i, j) = acc;
        }
    }
    out = r;
}

void minus_i_commutator_scalar(Mat4& out, const Mat4& h, const Mat4& r) {
    Mat4 t;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += h(i, k) * r(k, j) - r(i, k) * h(k, j);
            t(i, j) = cplx(acc.imag(), -acc.real());  // multiply by -i
        }
    }
    out = t;
}

void lincomb_scalar(Mat4& out, const Mat4& a, double s, const Mat4& b) {
    const double* pa = a.d();
    const double* pb = b.d();
    double* po = out.d();
    for (int i = 0; i < 32; ++i) po[i] = pa[i] + s * pb[i];
}

void rk4_update_scalar(Mat4& acc, const Mat4& k1, const Mat4& k2, const Mat4& k3, const Mat4& k4, double h) {
    const double w = h / 6.0;
    double* pa = acc.d();
    const double* p1 = k1.d();
    const double* p2 = k2.d();
    const double* p3 = k3.d();
    const double* p4 = k4.d();
    for (int i = 0; i < 32; ++i) pa[i] += w * (p1[i] + 2.0 * p2[i] + 2.0 * p3[i] + p4[i]);
}

constexpr Ops kScalarOps{"scalar", &matmul_scalar, &minus_i_commutator_scalar, &lincomb_scalar, &rk4_update_scalar};

std::atomic<const Ops*> g_active{nullptr};

const Ops* resolve_auto() noexcept {
    if (const char* env = std::getenv("DIMER_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &kScalarOps;
        if (std::strcmp(env, "avx2") == 0 && avx2_ops() != nullptr) return avx2_ops();
    }
    if (const Ops* v = avx2_ops()) return v;
    return &kScalarOps;
}

}  // namespace

const Ops& scalar_ops() noexcept { return kScalarOps; }

#if !defined(DIMER_BUILD_AVX2)
const Ops* avx2_ops() noexcept { return nullptr; }
#endif

const Ops& ops() noexcept {
    const Ops* p = g_active.load(std::memory_order_acquire);
    if (p == nullptr) {
        p = resolve_auto();
        g_active.store(p, std::memory_order_release);
    }
    return *p;
}

bool select_backend(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar:
            g_active.store(&kScalarOps, std::memory_order_release);
            return true;
        case Backend::Avx2:
            if (const Ops* v = avx2_ops()) {
                g_active.store(v, std::memory_order_release);
                return true;
            }
            return false;
        case Backend::Auto:
            g_active.store(resolve_auto(), std::memory_order_release);
            return true;
    }
    return false;
}

Backend active_backend() noexcept {
    const Ops& o = ops();
    if (&o == &kScalarOps) return Backend::Scalar;
    return Backend::Avx2;
}

}  // namespace dimer::kern
