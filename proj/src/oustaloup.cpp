#include "ncstune/oustaloup.hpp"

#include <cmath>
#include <stdexcept>

namespace ncstune {

RationalFilter oustaloup_filter(const OustaloupConfig& cfg) {
    if (!(cfg.omega_b > 0.0) || !(cfg.omega_b < cfg.omega_h))
        throw std::invalid_argument("oustaloup: need 0 < omega_b < omega_h");
    if (cfg.n_half < 1) throw std::invalid_argument("oustaloup: n_half >= 1");

    const int n_half = cfg.n_half;
    const int order = 2 * n_half + 1;
    const double ratio = cfg.omega_h / cfg.omega_b;

    RationalFilter f;
    f.zeros.reserve(order);
    f.poles.reserve(order);
    for (int k = -n_half; k <= n_half; ++k) {
        const double ep =
            (k + n_half + 0.5 * (1.0 + cfg.gamma)) / order;
        const double ez =
            (k + n_half + 0.5 * (1.0 - cfg.gamma)) / order;
        f.poles.push_back(cfg.omega_b * std::pow(ratio, ep));
        f.zeros.push_back(cfg.omega_b * std::pow(ratio, ez));
    }
    f.gain = std::pow(cfg.omega_h, cfg.gamma);
    return f;
}

StateSpaceModel filter_to_statespace(const RationalFilter& f) {
    if (f.zeros.size() != f.poles.size())
        throw std::invalid_argument("filter: zero/pole count mismatch");
    for (double p : f.poles)
        if (!(p > 0.0)) throw std::invalid_argument("filter: nonpositive pole");
    return StateSpaceModel::from_real_zpk(f.zeros, f.poles, f.gain);
}

std::complex<double> filter_response(const RationalFilter& f, double omega) {
    return zpk_response(f.zeros, f.poles, f.gain, omega);
}

StateSpaceModel fopid_controller(const ControllerParams& p, double omega_b,
                                 double omega_h, int n_half) {
    StateSpaceModel ctrl = StateSpaceModel::pure_gain(p.kp);

    auto branch = [&](double gain, double gamma) {
        if (gain == 0.0) return;  // branch contributes nothing
        StateSpaceModel g;
        if (gamma == 0.0) {
            g = StateSpaceModel::pure_gain(gain);  // s^0 = 1
        } else {
            OustaloupConfig cfg{gamma, omega_b, omega_h, n_half};
            RationalFilter f = oustaloup_filter(cfg);
            f.gain *= gain;
            g = filter_to_statespace(f);
        }
        ctrl = StateSpaceModel::parallel(ctrl, g);
    };

    branch(p.ki, -p.lambda);
    branch(p.kd, p.mu);
    return ctrl;
}

}  // namespace ncstune
