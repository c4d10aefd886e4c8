#pragma once

#include <cstdint>
#include <vector>

#include "ncstune/network.hpp"
#include "ncstune/oustaloup.hpp"
#include "ncstune/plants.hpp"
#include "ncstune/statespace.hpp"

namespace ncstune {

struct StepSpec {
    double amplitude = 0.0;
    double time = 0.0;
};

/// Closed-loop experiment shape: time-driven sensor and controller at period
/// ts, two lossy channels, TSO buffers at both receive points, ZOH actuator.
struct SimConfig {
    double ts = 0.01;
    double horizon = 10.0;
    StepSpec setpoint{1.0, 0.0};
    StepSpec disturbance{0.0, 5.0};  // added at the plant input
    ChannelConfig sc;                // sensor -> controller path
    ChannelConfig ca;                // controller -> actuator path
    bool tso_enabled = true;
    int substeps = 10;
};

/// Sampled signals of one run. All arrays share length horizon/ts + 1 unless
/// the plant diverged, in which case the trace is truncated at the last
/// finite sample and flagged.
struct Trace {
    std::vector<double> t;
    std::vector<double> r;
    std::vector<double> y;
    std::vector<double> u;  // value applied at the actuator
    std::vector<double> e;  // r - y
    bool diverged = false;
};

struct CostWeights {
    double w1 = 1.0;  // ITAE weight
    double w2 = 1.0;  // ISCO weight
};

/// Objective value substituted when a run diverges or its cost reaches this
/// magnitude; several orders above any legitimate closed-loop cost here.
inline constexpr double kPenalty = 1e6;

struct CostBreakdown {
    double itae = 0.0;
    double isco = 0.0;
    double j = 0.0;  // w1*itae + w2*isco, or kPenalty when penalized
    bool penalized = false;
    bool diverged = false;
};

/// One replicate of the networked loop. Per sample instant: the sensor sends
/// y on the SC path; SC deliveries pass the controller-side TSO buffer; the
/// controller integrates one period on the held error and sends its output on
/// the CA path; CA deliveries pass the actuator-side buffer; the plant then
/// integrates one period under the actuator hold plus the load disturbance.
/// With tso_enabled false every delivered packet overwrites the hold
/// regardless of stamp order. Holds start at 0.
Trace run_closed_loop(const DelayedRationalPlant& plant,
                      const StateSpaceModel& controller, const SimConfig& cfg,
                      std::uint64_t replicate_seed);

/// Trapezoidal ITAE/ISCO on the sample grid.
CostBreakdown cost(const Trace& trace, const CostWeights& w);

struct ExpectedCost {
    /// Mean over replicates. When no replicate was penalized, mean.j is
    /// computed from mean.itae and mean.isco so the j identity holds on the
    /// emitted record; otherwise it is the plain mean of the per-replicate j
    /// (penalties included) and mean.penalized is set.
    CostBreakdown mean;
    double std_j = 0.0;  // sample standard deviation of per-replicate j
    double divergence_fraction = 0.0;
    double penalized_fraction = 0.0;
    std::vector<CostBreakdown> replicates;
};

/// Replicated stochastic evaluation. Replicate i runs with a seed derived
/// from (master_seed, i); replicates may evaluate on `jobs` threads, and the
/// reduction runs in index order so the result is independent of scheduling.
ExpectedCost expected_cost(const DelayedRationalPlant& plant,
                           const StateSpaceModel& controller,
                           const SimConfig& cfg, const CostWeights& w,
                           int replicates, std::uint64_t master_seed,
                           int jobs = 1);

/// Same, building the controller from params with the default synthesis band.
ExpectedCost expected_cost(const DelayedRationalPlant& plant,
                           const ControllerParams& params, const SimConfig& cfg,
                           const CostWeights& w, int replicates,
                           std::uint64_t master_seed, int jobs = 1);

struct SurfaceCell {
    double lambda = 0.0;
    double mu = 0.0;
    CostBreakdown mean;
};

/// Expected cost over a (lambda, mu) grid with fixed {Kp, Ki, Kd}. Every cell
/// reuses the same master seed (common random numbers), so differences across
/// the grid reflect the orders rather than resampled noise.
std::vector<SurfaceCell> surface_sweep(const DelayedRationalPlant& plant,
                                       const ControllerParams& fixed_gains,
                                       const std::vector<double>& lambda_grid,
                                       const std::vector<double>& mu_grid,
                                       const SimConfig& cfg,
                                       const CostWeights& w, int replicates,
                                       std::uint64_t master_seed, int jobs = 1);

}  // namespace ncstune
