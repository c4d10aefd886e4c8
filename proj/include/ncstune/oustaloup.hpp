#pragma once

#include <span>

#include "ncstune/statespace.hpp"

#include <vector>

namespace ncstune {

/// Band and order of a recursive rational fit of s^gamma.
struct OustaloupConfig {
    double gamma = 0.0;     // differ-integration order, may be negative
    double omega_b = 1e-2;  // lower band edge, rad/s
    double omega_h = 1e2;   // upper band edge, rad/s
    int n_half = 2;         // filter order is 2*n_half + 1
};

/// Real zero/pole/gain data of the band-limited fit, frequencies ascending.
/// Poles of the filter sit at s = -poles[i], so positive entries mean stable.
struct RationalFilter {
    std::vector<double> zeros;
    std::vector<double> poles;
    double gain = 1.0;
};

/// PI^lambda D^mu parameter vector. Optimizers search
/// {kp, ki, kd} in [0, 100] and {lambda, mu} in [0, 2].
struct ControllerParams {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    double lambda = 1.0;
    double mu = 1.0;
};

/// Recursive zero/pole ladder approximating s^gamma over
/// [omega_b, omega_h]; high-frequency gain is omega_h^gamma.
/// Throws std::invalid_argument on a bad band or order.
RationalFilter oustaloup_filter(const OustaloupConfig& cfg);

/// Cascaded first-order-section realization of the filter.
StateSpaceModel filter_to_statespace(const RationalFilter& f);

std::complex<double> filter_response(const RationalFilter& f, double omega);

/// Parallel kp + ki*s^-lambda + kd*s^+mu with both fractional branches
/// realized through the Oustaloup fit on the given band. A branch whose
/// order is exactly zero collapses to a pure gain, and a branch with zero
/// gain is omitted.
StateSpaceModel fopid_controller(const ControllerParams& p,
                                 double omega_b = 1e-2, double omega_h = 1e2,
                                 int n_half = 2);

}  // namespace ncstune
