#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "ncstune/oustaloup.hpp"
#include "ncstune/plants.hpp"
#include "ncstune/rng.hpp"
#include "ncstune/simloop.hpp"

using namespace ncstune;

namespace {

Trace flat_trace(double ts, double horizon, double e_val, double u_val) {
    Trace tr;
    const int n = static_cast<int>(std::llround(horizon / ts));
    for (int k = 0; k <= n; ++k) {
        tr.t.push_back(k * ts);
        tr.r.push_back(e_val);
        tr.y.push_back(0.0);
        tr.e.push_back(e_val);
        tr.u.push_back(u_val);
    }
    return tr;
}

const ControllerParams kTable1NoNetwork{.kp = 2.688684627, .ki = 1.486143944,
                                        .kd = 0.045784858, .lambda = 1.0,
                                        .mu = 1.0};

}  // namespace

TEST_CASE("integral cost oracles") {
    SUBCASE("time-weighted absolute error of a unit error") {
        const auto cb = cost(flat_trace(0.01, 10.0, 1.0, 0.0), {});
        // integral of t over [0, 10] = 50; trapezoid is exact for linear
        CHECK(std::abs(cb.itae - 50.0) < 0.005 * 50.0);
        CHECK(std::abs(cb.itae - 50.0) < 1e-9);
        CHECK(cb.isco == 0.0);
    }
    SUBCASE("squared control effort of a constant") {
        const auto cb = cost(flat_trace(0.01, 10.0, 0.0, 2.0), {});
        CHECK(cb.isco == 40.0);  // trapezoid exact for constants, bitwise
        CHECK(cb.itae == 0.0);
        CHECK(cb.j == 40.0);
    }
    SUBCASE("zero signals cost nothing") {
        const auto cb = cost(flat_trace(0.01, 10.0, 0.0, 0.0), {});
        CHECK(cb.j == 0.0);
        CHECK_FALSE(cb.penalized);
    }
    SUBCASE("weights scale the terms and the identity holds bitwise") {
        Trace tr = flat_trace(0.01, 5.0, 0.0, 0.0);
        RngStream rng(5);
        for (std::size_t k = 0; k < tr.t.size(); ++k) {
            tr.e[k] = rng.uniform(-2.0, 2.0);
            tr.u[k] = rng.uniform(-3.0, 3.0);
        }
        const CostWeights w{.w1 = 0.7, .w2 = 1.9};
        const auto cb = cost(tr, w);
        CHECK(cb.j == w.w1 * cb.itae + w.w2 * cb.isco);
        CHECK_FALSE(cb.penalized);
    }
    SUBCASE("a diverged trace is penalized") {
        Trace tr = flat_trace(0.01, 1.0, 1.0, 1.0);
        tr.diverged = true;
        const auto cb = cost(tr, {});
        CHECK(cb.penalized);
        CHECK(cb.diverged);
        CHECK(cb.j == kPenalty);
    }
    SUBCASE("degenerate weights are rejected") {
        CHECK_THROWS_AS(cost(flat_trace(0.01, 1.0, 0.0, 0.0),
                             CostWeights{.w1 = 0.0, .w2 = 0.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(cost(flat_trace(0.01, 1.0, 0.0, 0.0),
                             CostWeights{.w1 = -1.0, .w2 = 1.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("zero excitation gives an exactly zero trace, channels regardless") {
    const auto plant = make_fodup(1.0, 0.2, 1.0);
    const auto controller = fopid_controller(kTable1NoNetwork);
    SimConfig cfg;
    cfg.setpoint = {0.0, 0.0};
    cfg.disturbance = {0.0, 5.0};
    cfg.horizon = 3.0;
    cfg.sc.drop_prob = 0.3;
    cfg.sc.delay = DelayLaw::uniform(0.0, 0.1);
    cfg.ca.drop_prob = 0.3;
    cfg.ca.delay = DelayLaw::uniform(0.0, 0.1);
    const Trace tr = run_closed_loop(plant, controller, cfg, 17);
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        CHECK(tr.y[k] == 0.0);
        CHECK(tr.u[k] == 0.0);
        CHECK(tr.e[k] == 0.0);
    }
    CHECK_FALSE(tr.diverged);
}

TEST_CASE("trace shape and error identity") {
    const auto plant = make_fodup(1.0, 0.2, 1.0);
    const auto controller = fopid_controller(kTable1NoNetwork);
    SimConfig cfg;  // default 10 s, unit step, disturbance at 5 s
    cfg.disturbance = {1.0, 5.0};
    const Trace tr = run_closed_loop(plant, controller, cfg, 1);
    REQUIRE(tr.t.size() == 1001);
    CHECK(tr.r.size() == 1001);
    CHECK(tr.y.size() == 1001);
    CHECK(tr.u.size() == 1001);
    CHECK(tr.e.size() == 1001);
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        CHECK(tr.e[k] == tr.r[k] - tr.y[k]);
        CHECK(tr.t[k] == static_cast<double>(k) * cfg.ts);
    }
    CHECK_FALSE(tr.diverged);
}

TEST_CASE("stable tracking with the published no-network gains") {
    const auto plant = make_fodup(1.0, 0.2, 1.0);
    const auto controller = fopid_controller(kTable1NoNetwork);
    SimConfig cfg;
    cfg.disturbance = {1.0, 5.0};
    const Trace tr = run_closed_loop(plant, controller, cfg, 42);
    REQUIRE_FALSE(tr.diverged);
    for (std::size_t k = 800; k < tr.t.size(); ++k)
        CHECK(std::abs(tr.y[k] - 1.0) < 0.02);
}

TEST_CASE("constant network delay equals an explicit shift reference") {
    // dyadic grid so delivery instants compare exactly: ts = 1/64 s,
    // path delay = 4 samples
    const double ts = 1.0 / 64.0;
    const int shift = 4;
    const double d = shift * ts;
    const auto plant = make_fodup(1.0, 0.25, 1.0);  // dead time 16 substeps
    const auto controller = fopid_controller(kTable1NoNetwork);

    SimConfig cfg;
    cfg.ts = ts;
    cfg.horizon = 8.0;
    cfg.setpoint = {1.0, 0.0};
    cfg.disturbance = {1.0, 4.0};
    cfg.sc.delay = DelayLaw::constant(d);
    cfg.ca.delay = DelayLaw::constant(d);
    const Trace tr = run_closed_loop(plant, controller, cfg, 7);
    REQUIRE_FALSE(tr.diverged);

    // reference: pure transport delays as array shifts, same integrators
    const int total = static_cast<int>(std::llround(cfg.horizon / ts));
    PlantState ps = make_plant_state(plant, ts / cfg.substeps);
    std::vector<double> xc(static_cast<std::size_t>(controller.n), 0.0);
    Rk4Workspace ws;
    std::vector<double> y_ref, u_ctrl_hist, u_act_ref;
    for (int k = 0; k <= total; ++k) {
        const double now = k * ts;
        const double r = 1.0;
        y_ref.push_back(plant_output(plant, ps));
        const double held =
            k >= shift ? y_ref[static_cast<std::size_t>(k - shift)] : 0.0;
        rk4_advance(controller, xc, r - held, ts, cfg.substeps, ws);
        u_ctrl_hist.push_back(controller.output(xc, r - held));
        const double u_act =
            k >= shift ? u_ctrl_hist[static_cast<std::size_t>(k - shift)] : 0.0;
        u_act_ref.push_back(u_act);
        if (k == total) break;
        const double load = now >= 4.0 ? 1.0 : 0.0;
        integrate_step(plant, ps, u_act + load, ts, cfg.substeps);
    }
    REQUIRE(tr.y.size() == y_ref.size());
    for (std::size_t k = 0; k < y_ref.size(); ++k) {
        CHECK(tr.y[k] == y_ref[k]);  // identical arithmetic path expected
        CHECK(tr.u[k] == u_act_ref[k]);
    }
}

TEST_CASE("zero-delay channels reproduce the direct loop") {
    const auto plant = make_fodup(1.0, 0.2, 1.0);
    const auto controller = fopid_controller(kTable1NoNetwork);
    SimConfig cfg;
    cfg.horizon = 4.0;
    const Trace tr = run_closed_loop(plant, controller, cfg, 3);

    PlantState ps = make_plant_state(plant, cfg.ts / cfg.substeps);
    std::vector<double> xc(static_cast<std::size_t>(controller.n), 0.0);
    Rk4Workspace ws;
    const int total = static_cast<int>(std::llround(cfg.horizon / cfg.ts));
    for (int k = 0; k <= total; ++k) {
        const double y = plant_output(plant, ps);
        CHECK(tr.y[static_cast<std::size_t>(k)] == y);
        rk4_advance(controller, xc, 1.0 - y, cfg.ts, cfg.substeps, ws);
        const double u = controller.output(xc, 1.0 - y);
        CHECK(tr.u[static_cast<std::size_t>(k)] == u);
        if (k == total) break;
        integrate_step(plant, ps, u, cfg.ts, cfg.substeps);
    }
}

TEST_CASE("identical seeds give bit-identical traces") {
    const auto plant = make_fodup(1.0, 0.2, 1.0);
    const auto controller = fopid_controller(kTable1NoNetwork);
    SimConfig cfg;
    cfg.sc.drop_prob = 0.1;
    cfg.sc.delay = DelayLaw::uniform(0.0, 0.1);
    cfg.ca.drop_prob = 0.1;
    cfg.ca.delay = DelayLaw::uniform(0.0, 0.1);
    cfg.disturbance = {1.0, 5.0};
    const Trace a = run_closed_loop(plant, controller, cfg, 42);
    const Trace b = run_closed_loop(plant, controller, cfg, 42);
    REQUIRE(a.t.size() == b.t.size());
    for (std::size_t k = 0; k < a.t.size(); ++k) {
        CHECK(a.y[k] == b.y[k]);
        CHECK(a.u[k] == b.u[k]);
    }
    const Trace c = run_closed_loop(plant, controller, cfg, 43);
    bool differs = false;
    for (std::size_t k = 0; k < a.t.size() && k < c.t.size(); ++k)
        differs = differs || a.y[k] != c.y[k];
    CHECK(differs);
}

TEST_CASE("replicated expectation") {
    const auto plant = make_fodup(1.0, 0.2, 1.0);
    const auto controller = fopid_controller(kTable1NoNetwork);
    SimConfig cfg;
    cfg.sc.drop_prob = 0.05;
    cfg.sc.delay = DelayLaw::uniform(0.0, 0.05);
    cfg.ca.drop_prob = 0.05;
    cfg.ca.delay = DelayLaw::uniform(0.0, 0.05);
    cfg.disturbance = {1.0, 5.0};
    const CostWeights w;

    SUBCASE("one replicate equals one seeded run") {
        const auto ec = expected_cost(plant, controller, cfg, w, 1, 42);
        const Trace tr = run_closed_loop(plant, controller, cfg,
                                         derive_seed(42, kStreamReplicate, 0));
        const auto cb = cost(tr, w);
        CHECK(ec.mean.j == cb.j);
        CHECK(ec.replicates.size() == 1);
        CHECK(ec.std_j == 0.0);
    }

    SUBCASE("deterministic channels give identical replicates") {
        SimConfig det = cfg;
        det.sc = {};
        det.ca = {};
        det.sc.delay = DelayLaw::constant(0.05);
        det.ca.delay = DelayLaw::constant(0.05);
        const auto ec = expected_cost(plant, controller, det, w, 5, 9);
        for (const auto& rep : ec.replicates) {
            CHECK(rep.j == ec.replicates[0].j);
            CHECK(rep.itae == ec.replicates[0].itae);
        }
        // Five bitwise-identical j values still leave std_j at the rounding
        // floor: fl(5j)/5 differs from j by ~1 ulp, so the two-pass deviations
        // are not exactly zero.  Bound it relative to the cost magnitude.
        CHECK(ec.std_j <= 1e-12 * ec.mean.j);
    }

    SUBCASE("result is independent of the worker count") {
        const auto a = expected_cost(plant, controller, cfg, w, 8, 42, 1);
        const auto b = expected_cost(plant, controller, cfg, w, 8, 42, 4);
        CHECK(a.mean.j == b.mean.j);
        CHECK(a.mean.itae == b.mean.itae);
        CHECK(a.std_j == b.std_j);
        for (std::size_t i = 0; i < a.replicates.size(); ++i)
            CHECK(a.replicates[i].j == b.replicates[i].j);
    }

    SUBCASE("mean preserves the cost identity when nothing is penalized") {
        const auto ec = expected_cost(plant, controller, cfg, w, 6, 42);
        REQUIRE(ec.penalized_fraction == 0.0);
        CHECK(ec.mean.j == w.w1 * ec.mean.itae + w.w2 * ec.mean.isco);
    }

    SUBCASE("divergence is reported and penalized") {
        // zero controller, load disturbance kicks the unstable plant
        const auto zero_ctrl = StateSpaceModel::pure_gain(0.0);
        SimConfig open = cfg;
        open.sc = {};
        open.ca = {};
        open.horizon = 16.0;
        open.setpoint = {0.0, 0.0};
        open.disturbance = {1.0, 1.0};
        const auto ec = expected_cost(plant, zero_ctrl, open, w, 3, 4);
        CHECK(ec.divergence_fraction == 1.0);
        CHECK(ec.penalized_fraction == 1.0);
        CHECK(ec.mean.j == kPenalty);
        CHECK(ec.mean.penalized);
    }
}

TEST_CASE("order surface") {
    const auto plant = make_fodup(1.0, 0.2, 1.0);
    SimConfig cfg;
    cfg.horizon = 6.0;
    cfg.disturbance = {1.0, 3.0};
    const CostWeights w;
    const ControllerParams gains{.kp = 2.688684627, .ki = 1.486143944,
                                 .kd = 0.045784858};
    const std::vector<double> lg{0.9, 1.0};
    const std::vector<double> mg{0.8, 1.0};
    const auto cells = surface_sweep(plant, gains, lg, mg, cfg, w, 2, 42);
    REQUIRE(cells.size() == 4);

    SUBCASE("grid is laid out row-major over (lambda, mu)") {
        CHECK(cells[0].lambda == 0.9);
        CHECK(cells[0].mu == 0.8);
        CHECK(cells[3].lambda == 1.0);
        CHECK(cells[3].mu == 1.0);
    }

    SUBCASE("unit-order cell equals the plain evaluation, same seed") {
        const auto ec = expected_cost(plant, gains, cfg, w, 2, 42);
        CHECK(cells[3].mean.j == ec.mean.j);
        CHECK(cells[3].mean.itae == ec.mean.itae);
    }

    SUBCASE("every cell honors the cost identity") {
        for (const auto& c : cells) {
            if (!c.mean.penalized)
                CHECK(c.mean.j == w.w1 * c.mean.itae + w.w2 * c.mean.isco);
            else
                CHECK(c.mean.j == kPenalty);
        }
    }
}
