#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "ncstune/config_io.hpp"
#include "ncstune/csv.hpp"
#include "ncstune/rng.hpp"

using namespace ncstune;

TEST_CASE("delay laws round-trip through json") {
    const DelayLaw laws[] = {
        DelayLaw::constant(0.05),
        DelayLaw::uniform(0.0, 0.1),
        DelayLaw::truncated_normal(0.05, 0.02, 0.0, 0.1),
        DelayLaw::truncated_exponential(20.0, 0.0, 0.1),
    };
    for (const auto& law : laws) {
        const auto back = delay_law_from_json(delay_law_to_json(law));
        CHECK(back.kind == law.kind);
        CHECK(back.lo == law.lo);
        CHECK(back.hi == law.hi);
        CHECK(back.mean == law.mean);
        CHECK(back.sd == law.sd);
        CHECK(back.rate == law.rate);
    }
    CHECK_THROWS_AS(delay_law_from_json(json::parse(R"({"law":"gamma"})")),
                    std::invalid_argument);
    CHECK_THROWS(delay_law_from_json(json::parse(R"({"law":"uniform"})")));
}

TEST_CASE("channels round-trip and validate") {
    ChannelConfig cfg;
    cfg.drop_prob = 0.1;
    cfg.delay = DelayLaw::uniform(0.0, 0.1);
    cfg.seed = 7;
    const auto back = channel_from_json(channel_to_json(cfg));
    CHECK(back.drop_prob == cfg.drop_prob);
    CHECK(back.seed == cfg.seed);
    CHECK(back.delay.kind == cfg.delay.kind);
    CHECK(back.delay.hi == cfg.delay.hi);

    const auto defaulted = channel_from_json(json::object());
    CHECK(defaulted.drop_prob == 0.0);
    CHECK(defaulted.delay.kind == DelayLaw::Kind::kConstant);
    CHECK_THROWS_AS(channel_from_json(json::parse(R"({"drop_prob":1.5})")),
                    std::invalid_argument);
}

TEST_CASE("plants parse from presets and from explicit coefficients") {
    const auto p1 = plant_from_json(json::parse(R"({"preset":"p1_fodup"})"));
    CHECK(p1.gain == 1.0);
    CHECK(p1.dead_time == 0.2);
    REQUIRE(p1.den.size() == 2);
    CHECK(p1.den[0] == 1.0);
    CHECK(p1.den[1] == -1.0);

    const auto p2 = plant_from_json(json::parse(R"({"preset":"p2_sodup"})"));
    REQUIRE(p2.den.size() == 3);
    CHECK(p2.den[0] == doctest::Approx(10.35));
    CHECK(p2.den[1] == doctest::Approx(2.93));
    CHECK(p2.den[2] == -1.0);

    const auto lag = plant_from_json(json::parse(R"({"preset":"lag_foptd"})"));
    REQUIRE(lag.relative_dead_time.has_value());
    CHECK(*lag.relative_dead_time == doctest::Approx(0.073 / 1.103));

    const auto generic = plant_from_json(json::parse(
        R"({"gain": 2.0, "dead_time": 0.5, "num": [1.0], "den": [3.0, 1.0]})"));
    CHECK(generic.gain == 2.0);
    CHECK(generic.dead_time == 0.5);
    CHECK(generic.den == std::vector<double>{3.0, 1.0});

    CHECK_THROWS_AS(plant_from_json(json::parse(R"({"preset":"p9"})")),
                    std::invalid_argument);
    CHECK_THROWS(plant_from_json(json::parse(R"({"gain": 1.0})")));
}

TEST_CASE("controller spec defaults and round trip") {
    const auto c = controller_from_json(json::object());
    CHECK(c.params.kp == 0.0);
    CHECK(c.params.lambda == 1.0);
    CHECK(c.params.mu == 1.0);
    CHECK(c.omega_b == 1e-2);
    CHECK(c.omega_h == 1e2);
    CHECK(c.n_half == 2);

    ControllerSpec spec;
    spec.params = {.kp = 2.5, .ki = 1.5, .kd = 0.2, .lambda = 0.99, .mu = 0.8};
    spec.omega_b = 1e-3;
    spec.omega_h = 1e3;
    spec.n_half = 3;
    const auto back = controller_from_json(controller_to_json(spec));
    CHECK(back.params.kp == spec.params.kp);
    CHECK(back.params.lambda == spec.params.lambda);
    CHECK(back.omega_b == spec.omega_b);
    CHECK(back.n_half == spec.n_half);
    // two fractional branches, each a (2*3+1)-order section at n_half = 3
    CHECK(back.to_statespace().n == 14);
}

TEST_CASE("sim config parses and validates") {
    const auto cfg = sim_from_json(json::parse(R"({
        "ts": 0.02, "horizon": 20.0,
        "setpoint": {"amplitude": 1.0, "time": 0.0},
        "disturbance": {"amplitude": 2.0, "time": 10.0},
        "sc": {"drop_prob": 0.1, "delay": {"law": "uniform", "lo": 0.0, "hi": 0.1}},
        "tso_enabled": false,
        "substeps": 5
    })"));
    CHECK(cfg.ts == 0.02);
    CHECK(cfg.horizon == 20.0);
    CHECK(cfg.disturbance.amplitude == 2.0);
    CHECK(cfg.sc.drop_prob == 0.1);
    CHECK(cfg.ca.drop_prob == 0.0);
    CHECK_FALSE(cfg.tso_enabled);
    CHECK(cfg.substeps == 5);

    const auto defaults = sim_from_json(json::object());
    CHECK(defaults.ts == 0.01);
    CHECK(defaults.horizon == 10.0);
    CHECK(defaults.setpoint.amplitude == 1.0);
    CHECK(defaults.tso_enabled);

    CHECK_THROWS_AS(sim_from_json(json::parse(R"({"ts": 0.0})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(sim_from_json(json::parse(
                        R"({"horizon": 5.0,
                            "disturbance": {"amplitude": 1.0, "time": 6.0}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(sim_from_json(json::parse(R"({"substeps": 0})")),
                    std::invalid_argument);
}

TEST_CASE("weights validate") {
    const auto w = weights_from_json(json::parse(R"({"w1": 2.0, "w2": 0.5})"));
    CHECK(w.w1 == 2.0);
    CHECK(w.w2 == 0.5);
    CHECK_THROWS_AS(weights_from_json(json::parse(R"({"w1": -1.0})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(weights_from_json(json::parse(R"({"w1": 0.0, "w2": 0.0})")),
                    std::invalid_argument);
}

TEST_CASE("grids accept arrays and linspace descriptions") {
    const auto arr = grid_from_json(json::parse(R"([0.5, 0.9, 1.1])"));
    CHECK(arr == std::vector<double>{0.5, 0.9, 1.1});

    const auto lin =
        grid_from_json(json::parse(R"({"min": 0.0, "max": 2.0, "points": 5})"));
    REQUIRE(lin.size() == 5);
    CHECK(lin.front() == 0.0);
    CHECK(lin.back() == 2.0);
    CHECK(lin[2] == 1.0);

    const auto single =
        grid_from_json(json::parse(R"({"min": 0.7, "max": 0.7, "points": 1})"));
    CHECK(single == std::vector<double>{0.7});

    CHECK_THROWS_AS(grid_from_json(json::parse("[]")), std::invalid_argument);
    CHECK_THROWS_AS(
        grid_from_json(json::parse(R"({"min": 1.0, "max": 0.0, "points": 3})")),
        std::invalid_argument);
}

TEST_CASE("tune experiment") {
    const auto ex = tune_experiment_from_json(json::parse(R"({
        "plant": {"preset": "p1_fodup"},
        "mode": "pid",
        "algorithm": "de_local_to_best_1",
        "de": {"np": 15, "g_max": 50, "f": 0.7, "cr": 0.9},
        "box": {"lo": [0, 0, 0], "hi": [10, 10, 10]},
        "sim": {"horizon": 8.0},
        "weights": {"w1": 1.0, "w2": 2.0},
        "replicates": 3,
        "seed": 99
    })"));
    CHECK(ex.algorithm == "de_local_to_best_1");
    CHECK(ex.setup.mode == TuneMode::kPid);
    REQUIRE(std::holds_alternative<DEConfig>(ex.setup.optimizer));
    const auto& de = std::get<DEConfig>(ex.setup.optimizer);
    CHECK(de.variant == DeVariant::kLocalToBest1);
    CHECK(de.np == 15);
    CHECK(de.g_max == 50);
    CHECK(de.f == 0.7);
    CHECK(de.cr == 0.9);
    CHECK(ex.setup.box.dim() == 3);
    CHECK(ex.setup.sim.horizon == 8.0);
    CHECK(ex.setup.weights.w2 == 2.0);
    CHECK(ex.setup.replicates == 3);
    CHECK(ex.seed == 99);

    const auto ga_ex = tune_experiment_from_json(json::parse(R"({
        "plant": {"preset": "p2_sodup"},
        "algorithm": "ga",
        "ga": {"pop": 12, "g_max": 30, "elite_count": 1}
    })"));
    REQUIRE(std::holds_alternative<GAConfig>(ga_ex.setup.optimizer));
    CHECK(std::get<GAConfig>(ga_ex.setup.optimizer).pop == 12);
    CHECK(ga_ex.setup.mode == TuneMode::kFopid);
    CHECK(ga_ex.seed == 42);  // default
    CHECK(ga_ex.setup.replicates == 5);

    CHECK_THROWS_AS(tune_experiment_from_json(json::parse(
                        R"({"plant": {"preset": "p1_fodup"},
                            "algorithm": "simulated_annealing"})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(tune_experiment_from_json(json::parse(
                        R"({"plant": {"preset": "p1_fodup"}, "mode": "pd"})")),
                    std::invalid_argument);
    CHECK_THROWS(tune_experiment_from_json(json::parse(R"({"mode": "pid"})")));
}

TEST_CASE("simulate experiment") {
    const auto ex = simulate_experiment_from_json(json::parse(R"({
        "plant": {"preset": "p1_fodup"},
        "controller": {"kp": 2.5, "ki": 1.5, "kd": 0.18,
                       "lambda": 0.99, "mu": 0.8},
        "sim": {"sc": {"drop_prob": 0.1,
                       "delay": {"law": "uniform", "lo": 0.0, "hi": 0.1}},
                "ca": {"drop_prob": 0.1,
                       "delay": {"law": "uniform", "lo": 0.0, "hi": 0.1}}}
    })"));
    CHECK(ex.controller.params.mu == 0.8);
    CHECK(ex.sim.ca.drop_prob == 0.1);
    CHECK(ex.seed == 42);
}

TEST_CASE("sweep experiment bounds its grids") {
    const auto ex = sweep_experiment_from_json(json::parse(R"({
        "plant": {"preset": "p1_fodup"},
        "gains": {"kp": 2.7, "ki": 1.6, "kd": 0.03},
        "lambda_grid": {"min": 0.5, "max": 1.5, "points": 3},
        "mu_grid": [0.8, 1.0],
        "replicates": 2
    })"));
    CHECK(ex.gains.kp == 2.7);
    CHECK(ex.lambda_grid.size() == 3);
    CHECK(ex.mu_grid.size() == 2);
    CHECK(ex.replicates == 2);

    CHECK_THROWS_AS(sweep_experiment_from_json(json::parse(R"({
        "plant": {"preset": "p1_fodup"},
        "gains": {"kp": 1.0},
        "lambda_grid": [2.5],
        "mu_grid": [1.0]
    })")),
                    std::invalid_argument);
}

TEST_CASE("channel audit experiment defaults") {
    const auto ex = channel_audit_from_json(json::parse(R"({
        "channel": {"drop_prob": 0.1,
                    "delay": {"law": "uniform", "lo": 0.0, "hi": 0.1}}
    })"));
    CHECK(ex.packets == 100000);
    CHECK(ex.ts == 0.01);
    CHECK(ex.histogram_bins == 20);
    CHECK(ex.seed == 42);
    CHECK_THROWS_AS(channel_audit_from_json(json::parse(
                        R"({"channel": {}, "packets": 0})")),
                    std::invalid_argument);
}

TEST_CASE("study configs") {
    const auto deg = degradation_study_from_json(json::parse(R"({
        "plant": {"preset": "p1_fodup"},
        "controller": {"kp": 2.6, "ki": 1.2, "kd": 0.57},
        "delay_bounds": [0.05, 0.1, 0.15],
        "drop_prob": 0.05,
        "replicates": 4
    })"));
    CHECK(deg.delay_bounds.size() == 3);
    CHECK(deg.drop_prob == 0.05);
    CHECK(deg.replicates == 4);

    const auto buf = buffer_study_from_json(json::parse(R"({
        "plant": {"preset": "p1_fodup"},
        "controller": {"kp": 2.6, "ki": 1.2, "kd": 0.57}
    })"));
    CHECK(buf.replicates == 20);

    const auto rob = robustness_study_from_json(json::parse(R"({
        "plant": {"preset": "p1_fodup"},
        "controller": {"kp": 2.6, "ki": 1.2, "kd": 0.57},
        "laws": [
            {"law": "uniform", "lo": 0.0, "hi": 0.1},
            {"law": "truncated_normal", "mean": 0.05, "sd": 0.02,
             "lo": 0.0, "hi": 0.1}
        ]
    })"));
    CHECK(rob.laws.size() == 2);
    CHECK(rob.laws[1].kind == DelayLaw::Kind::kTruncatedNormal);

    CHECK_THROWS_AS(robustness_study_from_json(json::parse(R"({
        "plant": {"preset": "p1_fodup"},
        "controller": {},
        "laws": []
    })")),
                    std::invalid_argument);
}

TEST_CASE("file loading reports the path") {
    CHECK_THROWS_AS(load_json_file("/nonexistent/nowhere.json"),
                    std::invalid_argument);
    const auto path =
        std::filesystem::temp_directory_path() / "ncstune_cfgio_bad.json";
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    try {
        load_json_file(path.string());
        FAIL("expected a parse failure");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("ncstune_cfgio_bad.json") !=
              std::string::npos);
    }
    std::filesystem::remove(path);

    const auto good = std::filesystem::temp_directory_path() /
                      "ncstune_cfgio_good.json";
    {
        std::ofstream out(good);
        out << R"({"a": 1})";
    }
    CHECK(load_json_file(good.string()).at("a").get<int>() == 1);
    std::filesystem::remove(good);
}

TEST_CASE("csv doubles survive the round trip bit for bit") {
    const auto roundtrip = [](double v) {
        const std::string s = format_double(v);
        return std::strtod(s.c_str(), nullptr) == v;
    };
    for (const double v : {0.0, 1.0, -1.0, 40.0, 0.1, 1.0 / 3.0, 1e-300,
                           -1e300, 6.03153306001983, 2.220446049250313e-16})
        CHECK(roundtrip(v));
    RngStream rng(123);
    for (int k = 0; k < 2000; ++k) {
        CHECK(roundtrip(rng.uniform(-1e6, 1e6)));
        CHECK(roundtrip(rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-30, 30))));
    }
    CHECK(format_double(40.0) == "40");
    CHECK(format_double(0.5) == "0.5");
    const std::vector<double> row{1.5, 2.0, -0.25};
    CHECK(csv_row(row) == "1.5,2,-0.25");
}
