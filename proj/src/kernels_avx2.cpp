// kernels_avx2.cpp — AVX2/FMA variants of the 4x4 complex kernels.
// Layout: one matrix row = 4 complex doubles = 8 doubles = 2 ymm registers.

#include "dimer/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace dimer::kern {

namespace {

// (ar + i*ai) * v for an interleaved [re,im,...] vector v:
//   re' = ar*vr - ai*vi,  im' = ar*vi + ai*vr
inline __m256d cmul_broadcast(__m256d ar, __m256d ai, __m256d v) {
    const __m256d vswap = _mm256_permute_pd(v, 0b0101);
    return _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, vswap));
}

void matmul_avx2(Mat4& out, const Mat4& a, const Mat4& b) {
    const double* pa = a.d();
    const double* pb = b.d();
    __m256d brow[8];
    for (int k = 0; k < 4; ++k) {
        brow[2 * k] = _mm256_load_pd(pb + 8 * k);
        brow[2 * k + 1] = _mm256_load_pd(pb + 8 * k + 4);
    }
    Mat4 r;
    double* pr = r.d();
    for (int i = 0; i < 4; ++i) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        for (int k = 0; k < 4; ++k) {
            const __m256d ar = _mm256_set1_pd(pa[8 * i + 2 * k]);
            const __m256d ai = _mm256_set1_pd(pa[8 * i + 2 * k + 1]);
            acc0 = _mm256_add_pd(acc0, cmul_broadcast(ar, ai, brow[2 * k]));
            acc1 = _mm256_add_pd(acc1, cmul_broadcast(ar, ai, brow[2 * k + 1]));
        }
        _mm256_store_pd(pr + 8 * i, acc0);
        _mm256_store_pd(pr + 8 * i + 4, acc1);
    }
    out = r;
}

void minus_i_commutator_avx2(Mat4& out, const Mat4& h, const Mat4& r) {
    const double* ph = h.d();
    const double* pr = r.d();
    __m256d hrow[8], rrow[8];
    for (int k = 0; k < 4; ++k) {
        hrow[2 * k] = _mm256_load_pd(ph + 8 * k);
        hrow[2 * k + 1] = _mm256_load_pd(ph + 8 * k + 4);
        rrow[2 * k] = _mm256_load_pd(pr + 8 * k);
        rrow[2 * k + 1] = _mm256_load_pd(pr + 8 * k + 4);
    }
    // -i*(x+iy) = y - i*x: swap re/im, negate the new imaginary lanes
    const __m256d negmask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    Mat4 res;
    double* po = res.d();
    for (int i = 0; i < 4; ++i) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        for (int k = 0; k < 4; ++k) {
            const __m256d har = _mm256_set1_pd(ph[8 * i + 2 * k]);
            const __m256d hai = _mm256_set1_pd(ph[8 * i + 2 * k + 1]);
            acc0 = _mm256_add_pd(acc0, cmul_broadcast(har, hai, rrow[2 * k]));
            acc1 = _mm256_add_pd(acc1, cmul_broadcast(har, hai, rrow[2 * k + 1]));
            const __m256d rar = _mm256_set1_pd(pr[8 * i + 2 * k]);
            const __m256d rai = _mm256_set1_pd(pr[8 * i + 2 * k + 1]);
            acc0 = _mm256_sub_pd(acc0, cmul_broadcast(rar, rai, hrow[2 * k]));
            acc1 = _mm256_sub_pd(acc1, cmul_broadcast(rar, rai, hrow[2 * k + 1]));
        }
        acc0 = _mm256_xor_pd(_mm256_permute_pd(acc0, 0b0101), negmask);
        acc1 = _mm256_xor_pd(_mm256_permute_pd(acc1, 0b0101), negmask);
        _mm256_store_pd(po + 8 * i, acc0);
        _mm256_store_pd(po + 8 * i + 4, acc1);
    }
    out = res;
}

void lincomb_avx2(Mat4& out, const Mat4& a, double s, const Mat4& b) {
    const __m256d vs = _mm256_set1_pd(s);
    const double* pa = a.d();
    const double* pb = b.d();
    double* po = out.d();
    for (int i = 0; i < 32; i += 4) {
        const __m256d va = _mm256_load_pd(pa + i);
        const __m256d vb = _mm256_load_pd(pb + i);
        _mm256_store_pd(po + i, _mm256_fmadd_pd(vs, vb, va));
    }
}

void rk4_update_avx2(Mat4& acc, const Mat4& k1, const Mat4& k2, const Mat4& k3, const Mat4& k4, double h) {
    const __m256d w = _mm256_set1_pd(h / 6.0);
    const __m256d two = _mm256_set1_pd(2.0);
    double* pa = acc.d();
    const double* p1 = k1.d();
    const double* p2 = k2.d();
    const double* p3 = k3.d();
    const double* p4 = k4.d();
    for (int i = 0; i < 32; i += 4) {
        __m256d sum = _mm256_add_pd(_mm256_load_pd(p1 + i), _mm256_load_pd(p4 + i));
        const __m256d mid = _mm256_add_pd(_mm256_load_pd(p2 + i), _mm256_load_pd(p3 + i));
        sum = _mm256_fmadd_pd(two, mid, sum);
        _mm256_store_pd(pa + i, _mm256_fmadd_pd(w, sum, _mm256_load_pd(pa + i)));
    }
}

constexpr Ops kAvx2Ops{"avx2", &matmul_avx2, &minus_i_commutator_avx2, &lincomb_avx2, &rk4_update_avx2};

bool cpu_has_avx2_fma() noexcept {
#if defined(__GNUC__) || defined(__clang__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

}  // namespace

const Ops* avx2_ops() noexcept {
    static const bool ok = cpu_has_avx2_fma();
    return ok ? &kAvx2Ops : nullptr;
}

}  // namespace dimer::kern

#else

namespace dimer::kern {
const Ops* avx2_ops() noexcept { return nullptr; }
}  // namespace dimer::kern

#endif
