// NEON variants for aarch64. NEON is baseline on aarch64 so no runtime CPU
// probe is needed, only the architecture check.

#include "ncstune/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace ncstune::kernels {

namespace {

inline double dot_neon_impl(int n, const double* a, const double* b) {
    float64x2_t acc = vdupq_n_f64(0.0);
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return vaddvq_f64(acc) + tail;
}

void lti_deriv_neon(int n, const double* A, const double* b, const double* x,
                    double u, double* dx) {
    for (int i = 0; i < n; ++i) {
        const double* row = A + static_cast<std::size_t>(i) * n;
        dx[i] = dot_neon_impl(n, row, x) + u * b[i];
    }
}

void vec_scale_add_neon(int n, const double* x, double a, const double* k,
                        double* out) {
    const float64x2_t va = vdupq_n_f64(a);
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(out + i, vfmaq_f64(vld1q_f64(x + i), va, vld1q_f64(k + i)));
    }
    for (; i < n; ++i) out[i] = x[i] + a * k[i];
}

void rk4_combine_neon(int n, double* x, double h6, const double* k1,
                      const double* k2, const double* k3, const double* k4) {
    const float64x2_t vh6 = vdupq_n_f64(h6);
    const float64x2_t two = vdupq_n_f64(2.0);
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t s = vld1q_f64(k1 + i);
        s = vfmaq_f64(s, two, vld1q_f64(k2 + i));
        s = vfmaq_f64(s, two, vld1q_f64(k3 + i));
        s = vaddq_f64(s, vld1q_f64(k4 + i));
        vst1q_f64(x + i, vfmaq_f64(vld1q_f64(x + i), vh6, s));
    }
    for (; i < n; ++i)
        x[i] += h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

double dot_neon(int n, const double* a, const double* b) {
    return dot_neon_impl(n, a, b);
}

double sum_t_abs_neon(int n, const double* t, const double* e) {
    float64x2_t acc = vdupq_n_f64(0.0);
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vfmaq_f64(acc, vld1q_f64(t + i), vabsq_f64(vld1q_f64(e + i)));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += t[i] * std::fabs(e[i]);
    return vaddvq_f64(acc) + tail;
}

double sum_sq_neon(int n, const double* u) {
    float64x2_t acc = vdupq_n_f64(0.0);
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(u + i);
        acc = vfmaq_f64(acc, v, v);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += u[i] * u[i];
    return vaddvq_f64(acc) + tail;
}

}  // namespace

const Ops* neon_ops_table() {
    static const Ops ops{
        "neon",           lti_deriv_neon, vec_scale_add_neon,
        rk4_combine_neon, dot_neon,       sum_t_abs_neon,
        sum_sq_neon,
    };
    return &ops;
}

}  // namespace ncstune::kernels

#endif  // aarch64
