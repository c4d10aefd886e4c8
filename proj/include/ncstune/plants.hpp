#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ncstune/statespace.hpp"

namespace ncstune {

/// Output magnitude beyond which a trajectory counts as diverged. Legitimate
/// responses in this problem family stay within a few units.
inline constexpr double kDivergenceLimit = 1e6;

/// Dead-time-plus-rational process gain*e^{-Ls}*num(s)/den(s), coefficients
/// in descending powers of s. The rational part is realized once at
/// construction; the dead time is handled by a per-state input delay line.
struct DelayedRationalPlant {
    double gain = 1.0;
    double dead_time = 0.0;
    std::vector<double> num;
    std::vector<double> den;
    StateSpaceModel rational;  // gain folded in

    // L/(L+T), set by make_foptd
    std::optional<double> relative_dead_time;
};

DelayedRationalPlant make_plant(double gain, double dead_time,
                                std::vector<double> num,
                                std::vector<double> den);

/// K e^{-Ls} / (T s - 1), one unstable pole at 1/T.
DelayedRationalPlant make_fodup(double k, double l, double t);

/// K e^{-Ls} / ((T1 s - 1)(T2 s + 1)).
DelayedRationalPlant make_sodup(double k, double l, double t1, double t2);

/// K e^{-Ls} / (T s + 1); records the relative dead time L/(L+T).
DelayedRationalPlant make_foptd(double k, double l, double t);

/// Integration state: rational-part state vector plus a ring buffer of past
/// inputs at substep resolution realizing e^{-Ls}. The dead time is
/// quantized to the nearest multiple of the substep.
struct PlantState {
    std::vector<double> x;
    std::vector<double> delay_line;
    std::size_t head = 0;
    Rk4Workspace ws;
};

PlantState make_plant_state(const DelayedRationalPlant& plant, double h_sub);

double plant_output(const DelayedRationalPlant& plant, const PlantState& s);

struct StepResult {
    double y = 0.0;
    bool diverged = false;
};

/// Advances the plant by h with the input held constant (ZOH), integrating
/// the rational part with classical RK4 at step h/substeps and pushing the
/// held input through the delay line once per substep. Reports divergence
/// when the output leaves [-kDivergenceLimit, kDivergenceLimit] or goes
/// non-finite.
StepResult integrate_step(const DelayedRationalPlant& plant, PlantState& s,
                          double u_held, double h, int substeps);

}  // namespace ncstune
