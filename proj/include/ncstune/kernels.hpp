#pragma once

#include <cstddef>

// Arithmetic inner loops of the simulator: dense LTI derivative evaluation,
// RK4 state updates, and the integral-cost reductions. Each operation has a
// scalar reference implementation plus SIMD variants (AVX2 on x86-64, NEON on
// aarch64) selected once at runtime. State dimensions are small (a handful of
// plant states plus ~10 controller states), so kernels take plain pointers and
// a length rather than a matrix type.

namespace ncstune::kernels {

struct Ops {
    const char* name;

    // dx = A*x + u*b, A row-major n*n
    void (*lti_deriv)(int n, const double* A, const double* b, const double* x,
                      double u, double* dx);

    // out = x + a*k
    void (*vec_scale_add)(int n, const double* x, double a, const double* k,
                          double* out);

    // x += h6*(k1 + 2*k2 + 2*k3 + k4)
    void (*rk4_combine)(int n, double* x, double h6, const double* k1,
                        const double* k2, const double* k3, const double* k4);

    // sum_i a[i]*b[i]
    double (*dot)(int n, const double* a, const double* b);

    // sum_i t[i]*|e[i]|  (ITAE integrand on the sample grid)
    double (*sum_t_abs)(int n, const double* t, const double* e);

    // sum_i u[i]^2       (ISCO integrand)
    double (*sum_sq)(int n, const double* u);
};

const Ops& scalar_ops();

// Best SIMD variant compiled in and supported by this CPU, or nullptr.
const Ops* simd_ops();

// Dispatch target used by the rest of the library. Defaults to the best
// available variant; override is global, so call it before spawning workers.
const Ops& active_ops();
void set_active_ops(const Ops& ops);

}  // namespace ncstune::kernels
