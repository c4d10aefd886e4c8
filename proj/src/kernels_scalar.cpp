#include "ncstune/kernels.hpp"

#include <cmath>

namespace ncstune::kernels {

namespace {

void lti_deriv_scalar(int n, const double* A, const double* b, const double* x,
                      double u, double* dx) {
    for (int i = 0; i < n; ++i) {
        const double* row = A + static_cast<std::size_t>(i) * n;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += row[j] * x[j];
        dx[i] = acc + u * b[i];
    }
}

void vec_scale_add_scalar(int n, const double* x, double a, const double* k,
                          double* out) {
    for (int i = 0; i < n; ++i) out[i] = x[i] + a * k[i];
}

void rk4_combine_scalar(int n, double* x, double h6, const double* k1,
                        const double* k2, const double* k3, const double* k4) {
    for (int i = 0; i < n; ++i)
        x[i] += h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

double dot_scalar(int n, const double* a, const double* b) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_t_abs_scalar(int n, const double* t, const double* e) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += t[i] * std::fabs(e[i]);
    return acc;
}

double sum_sq_scalar(int n, const double* u) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += u[i] * u[i];
    return acc;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{
        "scalar",          lti_deriv_scalar, vec_scale_add_scalar,
        rk4_combine_scalar, dot_scalar,      sum_t_abs_scalar,
        sum_sq_scalar,
    };
    return ops;
}

}  // namespace ncstune::kernels
