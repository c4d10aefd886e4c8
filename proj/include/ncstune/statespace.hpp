#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ncstune {

/// Single-input single-output continuous-time LTI model
///   x' = A x + B u,  y = C x + D u
/// with A row-major n*n. n may be zero (pure gain y = D u).
struct StateSpaceModel {
    int n = 0;
    std::vector<double> a;  // n*n, row-major
    std::vector<double> b;  // n
    std::vector<double> c;  // n
    double d = 0.0;

    static StateSpaceModel pure_gain(double k);

    /// Cascade of first-order sections realizing
    ///   K * prod_i (s + zeros[i]) / (s + poles[i])
    /// with zeros and poles paired by index. Oustaloup pole spreads cover
    /// several decades, so a cascade is used instead of one companion matrix.
    static StateSpaceModel from_real_zpk(std::span<const double> zeros,
                                         std::span<const double> poles,
                                         double gain);

    /// Controllable canonical realization of gain*num(s)/den(s),
    /// coefficients in descending powers of s, deg num <= deg den.
    static StateSpaceModel from_transfer_function(std::span<const double> num,
                                                  std::span<const double> den,
                                                  double gain = 1.0);

    /// Block-diagonal parallel connection; transfer functions add.
    static StateSpaceModel parallel(const StateSpaceModel& g1,
                                    const StateSpaceModel& g2);

    double output(std::span<const double> x, double u) const;
};

/// C (jwI - A)^-1 B + D. Direct complex elimination; kept independent of the
/// kernel dispatch so it can serve as an oracle for the time-domain path.
std::complex<double> freq_response(const StateSpaceModel& m, double omega);

/// prod (jw + z) / (jw + p) * gain, the other evaluation route for a
/// real-zero/pole cascade.
std::complex<double> zpk_response(std::span<const double> zeros,
                                  std::span<const double> poles, double gain,
                                  double omega);

/// Scratch vectors for rk4_step; reused across calls to avoid allocation.
struct Rk4Workspace {
    std::vector<double> k1, k2, k3, k4, xs;
    void resize(int n);
};

/// One classical RK4 step of x' = A x + B u with u constant over [t, t+h].
void rk4_step(const StateSpaceModel& m, std::span<double> x, double u, double h,
              Rk4Workspace& ws);

/// `substeps` RK4 substeps spanning h with the same held input.
void rk4_advance(const StateSpaceModel& m, std::span<double> x, double u,
                 double h, int substeps, Rk4Workspace& ws);

}  // namespace ncstune
