#include "ncstune/plants.hpp"

#include <cmath>
#include <stdexcept>

namespace ncstune {

DelayedRationalPlant make_plant(double gain, double dead_time,
                                std::vector<double> num,
                                std::vector<double> den) {
    if (dead_time < 0.0) throw std::invalid_argument("plant: dead_time < 0");
    if (den.empty() || den[0] == 0.0)
        throw std::invalid_argument("plant: bad denominator");
    if (num.empty()) throw std::invalid_argument("plant: empty numerator");
    if (num.size() > den.size())
        throw std::invalid_argument("plant: improper transfer function");

    DelayedRationalPlant p;
    p.gain = gain;
    p.dead_time = dead_time;
    p.num = std::move(num);
    p.den = std::move(den);
    p.rational = StateSpaceModel::from_transfer_function(p.num, p.den, p.gain);
    return p;
}

DelayedRationalPlant make_fodup(double k, double l, double t) {
    if (k == 0.0) throw std::invalid_argument("fodup: zero gain");
    if (!(t > 0.0)) throw std::invalid_argument("fodup: T must be positive");
    if (l < 0.0) throw std::invalid_argument("fodup: negative dead time");
    return make_plant(k, l, {1.0}, {t, -1.0});
}

DelayedRationalPlant make_sodup(double k, double l, double t1, double t2) {
    if (!(t1 > 0.0) || !(t2 > 0.0))
        throw std::invalid_argument("sodup: time constants must be positive");
    // (T1 s - 1)(T2 s + 1) = T1 T2 s^2 + (T1 - T2) s - 1
    return make_plant(k, l, {1.0}, {t1 * t2, t1 - t2, -1.0});
}

DelayedRationalPlant make_foptd(double k, double l, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("foptd: T must be positive");
    if (l < 0.0) throw std::invalid_argument("foptd: negative dead time");
    DelayedRationalPlant p = make_plant(k, l, {1.0}, {t, 1.0});
    p.relative_dead_time = l / (l + t);
    return p;
}

PlantState make_plant_state(const DelayedRationalPlant& plant, double h_sub) {
    if (!(h_sub > 0.0)) throw std::invalid_argument("plant state: h_sub <= 0");
    PlantState s;
    s.x.assign(plant.rational.n, 0.0);
    const auto slots =
        static_cast<std::size_t>(std::llround(plant.dead_time / h_sub));
    s.delay_line.assign(slots, 0.0);
    s.ws.resize(plant.rational.n);
    return s;
}

double plant_output(const DelayedRationalPlant& plant, const PlantState& s) {
    // Feedthrough sees the delayed input; it is zero for the strictly proper
    // processes used here, and with no dead time the current input is not
    // known at sampling, so 0 is passed.
    const double u_delayed =
        s.delay_line.empty() ? 0.0 : s.delay_line[s.head];
    return plant.rational.output(s.x, u_delayed);
}

StepResult integrate_step(const DelayedRationalPlant& plant, PlantState& s,
                          double u_held, double h, int substeps) {
    if (!(h > 0.0) || substeps < 1)
        throw std::invalid_argument("integrate_step: bad step");
    const double hs = h / substeps;
    const std::size_t slots = s.delay_line.size();
    double u_sub = u_held;
    for (int k = 0; k < substeps; ++k) {
        if (slots > 0) {
            // Oldest entry is the input from `slots` substeps ago; replace it
            // with the current one.
            u_sub = s.delay_line[s.head];
            s.delay_line[s.head] = u_held;
            s.head = (s.head + 1) % slots;
        }
        rk4_step(plant.rational, s.x, u_sub, hs, s.ws);
    }
    StepResult r;
    const double u_end = slots > 0 ? s.delay_line[s.head] : u_held;
    r.y = plant.rational.output(s.x, u_end);
    if (!std::isfinite(r.y) || std::fabs(r.y) > kDivergenceLimit) {
        r.diverged = true;
        return r;
    }
    for (double xi : s.x) {
        if (!std::isfinite(xi)) {
            r.diverged = true;
            break;
        }
    }
    return r;
}

}  // namespace ncstune
