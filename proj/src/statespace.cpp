#include "ncstune/statespace.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "ncstune/kernels.hpp"

namespace ncstune {

StateSpaceModel StateSpaceModel::pure_gain(double k) {
    StateSpaceModel m;
    m.d = k;
    return m;
}

StateSpaceModel StateSpaceModel::from_real_zpk(std::span<const double> zeros,
                                               std::span<const double> poles,
                                               double gain) {
    if (zeros.size() != poles.size())
        throw std::invalid_argument("zpk: zero/pole count mismatch");
    const int n = static_cast<int>(poles.size());

    // Section i: x_i' = -p_i x_i + v_i, v_{i+1} = (z_i - p_i) x_i + v_i,
    // with v_0 = gain*u. Expanding the chain gives a lower-triangular A.
    StateSpaceModel m;
    m.n = n;
    m.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    m.b.assign(n, gain);
    m.c.assign(n, 0.0);
    m.d = gain;
    for (int i = 0; i < n; ++i) {
        m.a[static_cast<std::size_t>(i) * n + i] = -poles[i];
        const double g = zeros[i] - poles[i];
        m.c[i] = g;
        for (int r = i + 1; r < n; ++r)
            m.a[static_cast<std::size_t>(r) * n + i] = g;
    }
    return m;
}

StateSpaceModel StateSpaceModel::from_transfer_function(
    std::span<const double> num, std::span<const double> den, double gain) {
    if (den.empty() || den[0] == 0.0)
        throw std::invalid_argument("transfer function: bad denominator");
    if (num.size() > den.size())
        throw std::invalid_argument("transfer function: improper (deg num > deg den)");

    const int n = static_cast<int>(den.size()) - 1;

    // Monic denominator and matching-length numerator.
    std::vector<double> a_coef(n);
    for (int i = 0; i < n; ++i) a_coef[i] = den[i + 1] / den[0];
    std::vector<double> b_coef(n + 1, 0.0);
    const std::size_t pad = den.size() - num.size();
    for (std::size_t i = 0; i < num.size(); ++i)
        b_coef[pad + i] = gain * num[i] / den[0];

    StateSpaceModel m;
    m.n = n;
    m.d = b_coef[0];
    m.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    m.b.assign(n, 0.0);
    m.c.assign(n, 0.0);
    if (n == 0) return m;

    // Controllable canonical form of the strictly proper remainder.
    for (int j = 0; j < n; ++j) m.a[static_cast<std::size_t>(0) * n + j] = -a_coef[j];
    for (int i = 1; i < n; ++i) m.a[static_cast<std::size_t>(i) * n + (i - 1)] = 1.0;
    m.b[0] = 1.0;
    for (int j = 0; j < n; ++j) m.c[j] = b_coef[j + 1] - m.d * a_coef[j];
    return m;
}

StateSpaceModel StateSpaceModel::parallel(const StateSpaceModel& g1,
                                          const StateSpaceModel& g2) {
    StateSpaceModel m;
    m.n = g1.n + g2.n;
    m.a.assign(static_cast<std::size_t>(m.n) * m.n, 0.0);
    m.b.reserve(m.n);
    m.c.reserve(m.n);
    for (int i = 0; i < g1.n; ++i)
        for (int j = 0; j < g1.n; ++j)
            m.a[static_cast<std::size_t>(i) * m.n + j] =
                g1.a[static_cast<std::size_t>(i) * g1.n + j];
    for (int i = 0; i < g2.n; ++i)
        for (int j = 0; j < g2.n; ++j)
            m.a[static_cast<std::size_t>(g1.n + i) * m.n + (g1.n + j)] =
                g2.a[static_cast<std::size_t>(i) * g2.n + j];
    m.b.insert(m.b.end(), g1.b.begin(), g1.b.end());
    m.b.insert(m.b.end(), g2.b.begin(), g2.b.end());
    m.c.insert(m.c.end(), g1.c.begin(), g1.c.end());
    m.c.insert(m.c.end(), g2.c.begin(), g2.c.end());
    m.d = g1.d + g2.d;
    return m;
}

double StateSpaceModel::output(std::span<const double> x, double u) const {
    assert(static_cast<int>(x.size()) == n);
    if (n == 0) return d * u;
    return kernels::active_ops().dot(n, c.data(), x.data()) + d * u;
}

std::complex<double> freq_response(const StateSpaceModel& m, double omega) {
    using cd = std::complex<double>;
    const int n = m.n;
    if (n == 0) return cd(m.d, 0.0);

    // Solve (jwI - A) x = B by elimination with partial pivoting.
    std::vector<cd> mat(static_cast<std::size_t>(n) * n);
    std::vector<cd> rhs(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            mat[static_cast<std::size_t>(i) * n + j] =
                cd(-m.a[static_cast<std::size_t>(i) * n + j],
                   i == j ? omega : 0.0);
        rhs[i] = cd(m.b[i], 0.0);
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(mat[static_cast<std::size_t>(col) * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double mag = std::abs(mat[static_cast<std::size_t>(r) * n + col]);
            if (mag > best) {
                best = mag;
                piv = r;
            }
        }
        if (best == 0.0)
            throw std::runtime_error("freq_response: singular (jwI - A)");
        if (piv != col) {
            for (int j = col; j < n; ++j)
                std::swap(mat[static_cast<std::size_t>(piv) * n + j],
                          mat[static_cast<std::size_t>(col) * n + j]);
            std::swap(rhs[piv], rhs[col]);
        }
        const cd inv_piv = 1.0 / mat[static_cast<std::size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            const cd f = mat[static_cast<std::size_t>(r) * n + col] * inv_piv;
            if (f == cd(0.0, 0.0)) continue;
            for (int j = col; j < n; ++j)
                mat[static_cast<std::size_t>(r) * n + j] -=
                    f * mat[static_cast<std::size_t>(col) * n + j];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<cd> x(n);
    for (int i = n - 1; i >= 0; --i) {
        cd acc = rhs[i];
        for (int j = i + 1; j < n; ++j)
            acc -= mat[static_cast<std::size_t>(i) * n + j] * x[j];
        x[i] = acc / mat[static_cast<std::size_t>(i) * n + i];
    }
    cd y(m.d, 0.0);
    for (int i = 0; i < n; ++i) y += cd(m.c[i], 0.0) * x[i];
    return y;
}

std::complex<double> zpk_response(std::span<const double> zeros,
                                  std::span<const double> poles, double gain,
                                  double omega) {
    using cd = std::complex<double>;
    cd y(gain, 0.0);
    for (double z : zeros) y *= cd(z, omega);
    for (double p : poles) y /= cd(p, omega);
    return y;
}

void Rk4Workspace::resize(int n) {
    k1.resize(n);
    k2.resize(n);
    k3.resize(n);
    k4.resize(n);
    xs.resize(n);
}

void rk4_step(const StateSpaceModel& m, std::span<double> x, double u, double h,
              Rk4Workspace& ws) {
    const int n = m.n;
    if (n == 0) return;
    const auto& ops = kernels::active_ops();
    const double* A = m.a.data();
    const double* B = m.b.data();
    ops.lti_deriv(n, A, B, x.data(), u, ws.k1.data());
    ops.vec_scale_add(n, x.data(), 0.5 * h, ws.k1.data(), ws.xs.data());
    ops.lti_deriv(n, A, B, ws.xs.data(), u, ws.k2.data());
    ops.vec_scale_add(n, x.data(), 0.5 * h, ws.k2.data(), ws.xs.data());
    ops.lti_deriv(n, A, B, ws.xs.data(), u, ws.k3.data());
    ops.vec_scale_add(n, x.data(), h, ws.k3.data(), ws.xs.data());
    ops.lti_deriv(n, A, B, ws.xs.data(), u, ws.k4.data());
    ops.rk4_combine(n, x.data(), h / 6.0, ws.k1.data(), ws.k2.data(),
                    ws.k3.data(), ws.k4.data());
}

void rk4_advance(const StateSpaceModel& m, std::span<double> x, double u,
                 double h, int substeps, Rk4Workspace& ws) {
    if (m.n == 0) return;
    ws.resize(m.n);
    const double hs = h / substeps;
    for (int s = 0; s < substeps; ++s) rk4_step(m, x, u, hs, ws);
}

}  // namespace ncstune
