// AVX2+FMA variants of the inner-loop kernels. Compiled with -mavx2 -mfma on
// x86-64 only; selection happens at runtime in kernels_dispatch.cpp.

#include "ncstune/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace ncstune::kernels {

namespace {

inline double hsum256(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double dot_avx2_impl(int n, const double* a, const double* b) {
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_fmadd_pd(va, vb, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return hsum256(acc) + tail;
}

void lti_deriv_avx2(int n, const double* A, const double* b, const double* x,
                    double u, double* dx) {
    for (int i = 0; i < n; ++i) {
        const double* row = A + static_cast<std::size_t>(i) * n;
        dx[i] = dot_avx2_impl(n, row, x) + u * b[i];
    }
}

void vec_scale_add_avx2(int n, const double* x, double a, const double* k,
                        double* out) {
    const __m256d va = _mm256_set1_pd(a);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vk = _mm256_loadu_pd(k + i);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, vk, vx));
    }
    for (; i < n; ++i) out[i] = x[i] + a * k[i];
}

void rk4_combine_avx2(int n, double* x, double h6, const double* k1,
                      const double* k2, const double* k3, const double* k4) {
    const __m256d vh6 = _mm256_set1_pd(h6);
    const __m256d two = _mm256_set1_pd(2.0);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_loadu_pd(k1 + i);
        s = _mm256_fmadd_pd(two, _mm256_loadu_pd(k2 + i), s);
        s = _mm256_fmadd_pd(two, _mm256_loadu_pd(k3 + i), s);
        s = _mm256_add_pd(s, _mm256_loadu_pd(k4 + i));
        __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(x + i, _mm256_fmadd_pd(vh6, s, vx));
    }
    for (; i < n; ++i)
        x[i] += h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

double dot_avx2(int n, const double* a, const double* b) {
    return dot_avx2_impl(n, a, b);
}

double sum_t_abs_avx2(int n, const double* t, const double* e) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vt = _mm256_loadu_pd(t + i);
        __m256d ve = _mm256_andnot_pd(signmask, _mm256_loadu_pd(e + i));
        acc = _mm256_fmadd_pd(vt, ve, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += t[i] * std::fabs(e[i]);
    return hsum256(acc) + tail;
}

double sum_sq_avx2(int n, const double* u) {
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(u + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += u[i] * u[i];
    return hsum256(acc) + tail;
}

}  // namespace

const Ops* avx2_ops_table() {
    static const Ops ops{
        "avx2",           lti_deriv_avx2, vec_scale_add_avx2,
        rk4_combine_avx2, dot_avx2,       sum_t_abs_avx2,
        sum_sq_avx2,
    };
    return &ops;
}

}  // namespace ncstune::kernels

#endif  // x86-64
