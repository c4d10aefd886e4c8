#include "ncstune/simloop.hpp"

#include <cmath>
#include <stdexcept>

#include "ncstune/kernels.hpp"
#include "ncstune/parallel.hpp"
#include "ncstune/rng.hpp"

namespace ncstune {

namespace {

double step_value(const StepSpec& s, double t) {
    return t >= s.time ? s.amplitude : 0.0;
}

/// h * (sum f - (f_first + f_last)/2), the trapezoidal rule on a uniform
/// grid, written so that constant integrands come out exact.
double trapezoid(double h, double sum, double first, double last) {
    return h * (sum - 0.5 * (first + last));
}

}  // namespace

Trace run_closed_loop(const DelayedRationalPlant& plant,
                      const StateSpaceModel& controller, const SimConfig& cfg,
                      std::uint64_t replicate_seed) {
    if (cfg.ts <= 0.0 || cfg.horizon < cfg.ts)
        throw std::invalid_argument("sim: horizon must cover at least one period");
    if (cfg.substeps < 1) throw std::invalid_argument("sim: substeps < 1");

    const long long total = std::llround(cfg.horizon / cfg.ts);
    const double h_sub = cfg.ts / cfg.substeps;

    Channel sc(cfg.sc, derive_seed(replicate_seed ^ cfg.sc.seed, kStreamChannel, 0));
    Channel ca(cfg.ca, derive_seed(replicate_seed ^ cfg.ca.seed, kStreamChannel, 1));
    TsoBuffer held_meas;     // controller-side hold
    TsoBuffer actuator;      // actuator-side hold

    PlantState ps = make_plant_state(plant, h_sub);
    std::vector<double> xc(static_cast<std::size_t>(controller.n), 0.0);
    Rk4Workspace ws;

    Trace tr;
    const std::size_t samples = static_cast<std::size_t>(total) + 1;
    tr.t.reserve(samples);
    tr.r.reserve(samples);
    tr.y.reserve(samples);
    tr.u.reserve(samples);
    tr.e.reserve(samples);

    for (long long k = 0; k <= total; ++k) {
        const double now = static_cast<double>(k) * cfg.ts;
        const double r = step_value(cfg.setpoint, now);

        // time-driven sensor
        const double y = plant_output(plant, ps);
        sc.send(y, now);

        // controller-side receive
        for (const Packet& p : sc.poll(now)) {
            if (cfg.tso_enabled) {
                sc.record_tso(p.seq, held_meas.accept(p));
            } else {
                held_meas.force(p);
                sc.record_tso(p.seq, true);
            }
        }

        // controller advances one period on the held error, then transmits
        const double err_held = r - held_meas.held_value;
        rk4_advance(controller, xc, err_held, cfg.ts, cfg.substeps, ws);
        const double u_ctrl = controller.output(xc, err_held);
        ca.send(u_ctrl, now);

        // actuator-side receive
        for (const Packet& p : ca.poll(now)) {
            if (cfg.tso_enabled) {
                ca.record_tso(p.seq, actuator.accept(p));
            } else {
                actuator.force(p);
                ca.record_tso(p.seq, true);
            }
        }
        const double u_act = actuator.held_value;

        tr.t.push_back(now);
        tr.r.push_back(r);
        tr.y.push_back(y);
        tr.u.push_back(u_act);
        tr.e.push_back(r - y);

        if (k == total) break;

        // plant integrates the period under the hold plus load disturbance
        const double load = step_value(cfg.disturbance, now);
        const StepResult res =
            integrate_step(plant, ps, u_act + load, cfg.ts, cfg.substeps);
        if (res.diverged || !std::isfinite(u_ctrl)) {
            tr.diverged = true;
            break;
        }
    }
    return tr;
}

CostBreakdown cost(const Trace& trace, const CostWeights& w) {
    if (w.w1 < 0.0 || w.w2 < 0.0 || (w.w1 == 0.0 && w.w2 == 0.0))
        throw std::invalid_argument("cost: weights must be nonnegative, not both zero");

    CostBreakdown out;
    out.diverged = trace.diverged;
    const int n = static_cast<int>(trace.t.size());
    if (n >= 2) {
        const double h = trace.t[1] - trace.t[0];
        const auto& k = kernels::active_ops();
        const double te_sum = k.sum_t_abs(n, trace.t.data(), trace.e.data());
        const double uu_sum = k.sum_sq(n, trace.u.data());
        out.itae = trapezoid(h, te_sum,
                             trace.t.front() * std::abs(trace.e.front()),
                             trace.t.back() * std::abs(trace.e.back()));
        out.isco = trapezoid(h, uu_sum, trace.u.front() * trace.u.front(),
                             trace.u.back() * trace.u.back());
    }
    out.j = w.w1 * out.itae + w.w2 * out.isco;
    if (trace.diverged || !(out.j < kPenalty)) {  // also catches NaN
        out.penalized = true;
        out.j = kPenalty;
    }
    return out;
}

ExpectedCost expected_cost(const DelayedRationalPlant& plant,
                           const StateSpaceModel& controller,
                           const SimConfig& cfg, const CostWeights& w,
                           int replicates, std::uint64_t master_seed,
                           int jobs) {
    if (replicates < 1) throw std::invalid_argument("expected_cost: replicates < 1");

    ExpectedCost out;
    out.replicates.resize(static_cast<std::size_t>(replicates));
    parallel_for(static_cast<std::size_t>(replicates), jobs, [&](std::size_t i) {
        const std::uint64_t rep_seed =
            derive_seed(master_seed, kStreamReplicate, static_cast<std::uint64_t>(i));
        const Trace tr = run_closed_loop(plant, controller, cfg, rep_seed);
        out.replicates[i] = cost(tr, w);
    });

    // fixed index-order reduction: the result cannot depend on `jobs`
    double sum_itae = 0.0, sum_isco = 0.0, sum_j = 0.0;
    int n_div = 0, n_pen = 0;
    for (const CostBreakdown& c : out.replicates) {
        sum_itae += c.itae;
        sum_isco += c.isco;
        sum_j += c.j;
        n_div += c.diverged ? 1 : 0;
        n_pen += c.penalized ? 1 : 0;
    }
    const double m = static_cast<double>(replicates);
    out.mean.itae = sum_itae / m;
    out.mean.isco = sum_isco / m;
    out.mean.diverged = n_div > 0;
    out.mean.penalized = n_pen > 0;
    out.mean.j = n_pen == 0 ? w.w1 * out.mean.itae + w.w2 * out.mean.isco
                            : sum_j / m;
    out.divergence_fraction = static_cast<double>(n_div) / m;
    out.penalized_fraction = static_cast<double>(n_pen) / m;

    double ss = 0.0;
    const double mean_j = sum_j / m;
    for (const CostBreakdown& c : out.replicates) {
        const double d = c.j - mean_j;
        ss += d * d;
    }
    out.std_j = replicates > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    return out;
}

ExpectedCost expected_cost(const DelayedRationalPlant& plant,
                           const ControllerParams& params, const SimConfig& cfg,
                           const CostWeights& w, int replicates,
                           std::uint64_t master_seed, int jobs) {
    const StateSpaceModel controller = fopid_controller(params);
    return expected_cost(plant, controller, cfg, w, replicates, master_seed, jobs);
}

std::vector<SurfaceCell> surface_sweep(const DelayedRationalPlant& plant,
                                       const ControllerParams& fixed_gains,
                                       const std::vector<double>& lambda_grid,
                                       const std::vector<double>& mu_grid,
                                       const SimConfig& cfg,
                                       const CostWeights& w, int replicates,
                                       std::uint64_t master_seed, int jobs) {
    std::vector<SurfaceCell> cells(lambda_grid.size() * mu_grid.size());
    // parallelize over cells (coarser than replicates); each cell still uses
    // the common master seed
    parallel_for(cells.size(), jobs, [&](std::size_t idx) {
        const std::size_t li = idx / mu_grid.size();
        const std::size_t mi = idx % mu_grid.size();
        ControllerParams p = fixed_gains;
        p.lambda = lambda_grid[li];
        p.mu = mu_grid[mi];
        SurfaceCell& cell = cells[idx];
        cell.lambda = p.lambda;
        cell.mu = p.mu;
        cell.mean =
            expected_cost(plant, p, cfg, w, replicates, master_seed, 1).mean;
    });
    return cells;
}

}  // namespace ncstune
