#include "ncstune/config_io.hpp"

#include <fstream>
#include <stdexcept>

namespace ncstune {

StateSpaceModel ControllerSpec::to_statespace() const {
    return fopid_controller(params, omega_b, omega_h, n_half);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

DelayLaw delay_law_from_json(const json& j) {
    const std::string law = j.at("law").get<std::string>();
    if (law == "constant")
        return DelayLaw::constant(j.at("value").get<double>());
    if (law == "uniform")
        return DelayLaw::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
    if (law == "truncated_normal")
        return DelayLaw::truncated_normal(j.at("mean").get<double>(),
                                          j.at("sd").get<double>(),
                                          j.at("lo").get<double>(),
                                          j.at("hi").get<double>());
    if (law == "truncated_exponential")
        return DelayLaw::truncated_exponential(j.at("rate").get<double>(),
                                               j.at("lo").get<double>(),
                                               j.at("hi").get<double>());
    throw std::invalid_argument("unknown delay law: " + law);
}

json delay_law_to_json(const DelayLaw& law) {
    json j;
    j["law"] = delay_law_name(law);
    switch (law.kind) {
        case DelayLaw::Kind::kConstant:
            j["value"] = law.lo;
            break;
        case DelayLaw::Kind::kUniform:
            j["lo"] = law.lo;
            j["hi"] = law.hi;
            break;
        case DelayLaw::Kind::kTruncatedNormal:
            j["mean"] = law.mean;
            j["sd"] = law.sd;
            j["lo"] = law.lo;
            j["hi"] = law.hi;
            break;
        case DelayLaw::Kind::kTruncatedExponential:
            j["rate"] = law.rate;
            j["lo"] = law.lo;
            j["hi"] = law.hi;
            break;
    }
    return j;
}

const char* delay_law_name(const DelayLaw& law) {
    switch (law.kind) {
        case DelayLaw::Kind::kConstant: return "constant";
        case DelayLaw::Kind::kUniform: return "uniform";
        case DelayLaw::Kind::kTruncatedNormal: return "truncated_normal";
        case DelayLaw::Kind::kTruncatedExponential: return "truncated_exponential";
    }
    return "?";
}

ChannelConfig channel_from_json(const json& j) {
    ChannelConfig cfg;
    cfg.drop_prob = j.value("drop_prob", 0.0);
    if (j.contains("delay")) cfg.delay = delay_law_from_json(j.at("delay"));
    cfg.seed = j.value<std::uint64_t>("seed", 0);
    if (cfg.drop_prob < 0.0 || cfg.drop_prob > 1.0)
        throw std::invalid_argument("channel: drop_prob outside [0, 1]");
    return cfg;
}

json channel_to_json(const ChannelConfig& cfg) {
    return json{{"drop_prob", cfg.drop_prob},
                {"delay", delay_law_to_json(cfg.delay)},
                {"seed", cfg.seed}};
}

DelayedRationalPlant plant_from_json(const json& j) {
    if (j.contains("preset")) {
        const std::string name = j.at("preset").get<std::string>();
        if (name == "p1_fodup") return make_fodup(1.0, 0.2, 1.0);
        if (name == "p2_sodup") return make_sodup(1.0, 0.939, 5.0, 2.07);
        if (name == "lag_foptd") return make_foptd(1.0, 0.073, 1.03);
        if (name == "delay_foptd") return make_foptd(1.0, 1.0, 0.093);
        throw std::invalid_argument("unknown plant preset: " + name);
    }
    return make_plant(j.at("gain").get<double>(), j.at("dead_time").get<double>(),
                      j.at("num").get<std::vector<double>>(),
                      j.at("den").get<std::vector<double>>());
}

ControllerSpec controller_from_json(const json& j) {
    ControllerSpec c;
    c.params.kp = j.value("kp", 0.0);
    c.params.ki = j.value("ki", 0.0);
    c.params.kd = j.value("kd", 0.0);
    c.params.lambda = j.value("lambda", 1.0);
    c.params.mu = j.value("mu", 1.0);
    c.omega_b = j.value("omega_b", 1e-2);
    c.omega_h = j.value("omega_h", 1e2);
    c.n_half = j.value("n_half", 2);
    return c;
}

json controller_to_json(const ControllerSpec& c) {
    return json{{"kp", c.params.kp},     {"ki", c.params.ki},
                {"kd", c.params.kd},     {"lambda", c.params.lambda},
                {"mu", c.params.mu},     {"omega_b", c.omega_b},
                {"omega_h", c.omega_h},  {"n_half", c.n_half}};
}

namespace {

StepSpec step_from_json(const json& j) {
    StepSpec s;
    s.amplitude = j.value("amplitude", 0.0);
    s.time = j.value("time", 0.0);
    return s;
}

}  // namespace

SimConfig sim_from_json(const json& j) {
    SimConfig cfg;
    cfg.ts = j.value("ts", 0.01);
    cfg.horizon = j.value("horizon", 10.0);
    if (j.contains("setpoint")) cfg.setpoint = step_from_json(j.at("setpoint"));
    if (j.contains("disturbance"))
        cfg.disturbance = step_from_json(j.at("disturbance"));
    if (j.contains("sc")) cfg.sc = channel_from_json(j.at("sc"));
    if (j.contains("ca")) cfg.ca = channel_from_json(j.at("ca"));
    cfg.tso_enabled = j.value("tso_enabled", true);
    cfg.substeps = j.value("substeps", 10);
    if (cfg.ts <= 0.0) throw std::invalid_argument("sim: ts must be positive");
    if (cfg.horizon < cfg.setpoint.time)
        throw std::invalid_argument("sim: horizon before the setpoint step");
    if (cfg.disturbance.amplitude != 0.0 && cfg.disturbance.time >= cfg.horizon)
        throw std::invalid_argument("sim: disturbance after the horizon");
    if (cfg.substeps < 1) throw std::invalid_argument("sim: substeps < 1");
    return cfg;
}

CostWeights weights_from_json(const json& j) {
    CostWeights w;
    w.w1 = j.value("w1", 1.0);
    w.w2 = j.value("w2", 1.0);
    if (w.w1 < 0.0 || w.w2 < 0.0 || (w.w1 == 0.0 && w.w2 == 0.0))
        throw std::invalid_argument("weights must be nonnegative, not both zero");
    return w;
}

std::vector<double> grid_from_json(const json& j) {
    if (j.is_array()) {
        auto g = j.get<std::vector<double>>();
        if (g.empty()) throw std::invalid_argument("grid: empty array");
        return g;
    }
    const double lo = j.at("min").get<double>();
    const double hi = j.at("max").get<double>();
    const int points = j.at("points").get<int>();
    if (points < 1 || hi < lo) throw std::invalid_argument("grid: bad range");
    std::vector<double> g(static_cast<std::size_t>(points));
    if (points == 1) {
        g[0] = lo;
    } else {
        for (int i = 0; i < points; ++i)
            g[static_cast<std::size_t>(i)] =
                lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    }
    return g;
}

namespace {

DEConfig de_from_json(const json& j, DeVariant variant) {
    DEConfig cfg;
    cfg.variant = variant;
    cfg.np = j.value("np", 20);
    cfg.g_max = j.value("g_max", 200);
    cfg.f = j.value("f", 0.85);
    cfg.cr = j.value("cr", 0.5);
    return cfg;
}

GAConfig ga_from_json(const json& j) {
    GAConfig cfg;
    cfg.pop = j.value("pop", 20);
    cfg.g_max = j.value("g_max", 200);
    cfg.crossover_fraction = j.value("crossover_fraction", 0.8);
    cfg.mutation_fraction = j.value("mutation_fraction", 0.2);
    cfg.elite_count = j.value("elite_count", 2);
    return cfg;
}

SearchBox box_from_json(const json& j) {
    SearchBox box;
    box.lo = j.at("lo").get<std::vector<double>>();
    box.hi = j.at("hi").get<std::vector<double>>();
    return box;
}

}  // namespace

TuneExperiment tune_experiment_from_json(const json& j) {
    TuneExperiment ex;
    ex.plant = plant_from_json(j.at("plant"));
    ex.seed = j.value<std::uint64_t>("seed", 42);

    const std::string mode = j.value("mode", "fopid");
    if (mode == "pid") ex.setup.mode = TuneMode::kPid;
    else if (mode == "fopid") ex.setup.mode = TuneMode::kFopid;
    else throw std::invalid_argument("tune: unknown mode " + mode);

    ex.algorithm = j.value("algorithm", "de_rand_1");
    const json de_block = j.value("de", json::object());
    const json ga_block = j.value("ga", json::object());
    if (ex.algorithm == "de_rand_1")
        ex.setup.optimizer = de_from_json(de_block, DeVariant::kRand1);
    else if (ex.algorithm == "de_local_to_best_1")
        ex.setup.optimizer = de_from_json(de_block, DeVariant::kLocalToBest1);
    else if (ex.algorithm == "de_best_1_jitter")
        ex.setup.optimizer = de_from_json(de_block, DeVariant::kBest1Jitter);
    else if (ex.algorithm == "de_rand_1_vector_dither")
        ex.setup.optimizer = de_from_json(de_block, DeVariant::kRand1VectorDither);
    else if (ex.algorithm == "de_rand_1_generation_dither")
        ex.setup.optimizer =
            de_from_json(de_block, DeVariant::kRand1GenerationDither);
    else if (ex.algorithm == "ga")
        ex.setup.optimizer = ga_from_json(ga_block);
    else
        throw std::invalid_argument("tune: unknown algorithm " + ex.algorithm);

    if (j.contains("box")) ex.setup.box = box_from_json(j.at("box"));
    ex.setup.sim = sim_from_json(j.value("sim", json::object()));
    ex.setup.weights = weights_from_json(j.value("weights", json::object()));
    ex.setup.replicates = j.value("replicates", 5);
    if (ex.setup.replicates < 1)
        throw std::invalid_argument("tune: replicates < 1");
    return ex;
}

SimulateExperiment simulate_experiment_from_json(const json& j) {
    SimulateExperiment ex;
    ex.plant = plant_from_json(j.at("plant"));
    ex.controller = controller_from_json(j.at("controller"));
    ex.sim = sim_from_json(j.value("sim", json::object()));
    ex.weights = weights_from_json(j.value("weights", json::object()));
    ex.seed = j.value<std::uint64_t>("seed", 42);
    return ex;
}

SweepExperiment sweep_experiment_from_json(const json& j) {
    SweepExperiment ex;
    ex.plant = plant_from_json(j.at("plant"));
    const json& g = j.at("gains");
    ex.gains.kp = g.value("kp", 0.0);
    ex.gains.ki = g.value("ki", 0.0);
    ex.gains.kd = g.value("kd", 0.0);
    ex.lambda_grid = grid_from_json(j.at("lambda_grid"));
    ex.mu_grid = grid_from_json(j.at("mu_grid"));
    for (double v : ex.lambda_grid)
        if (v < 0.0 || v > 2.0)
            throw std::invalid_argument("sweep: lambda grid outside [0, 2]");
    for (double v : ex.mu_grid)
        if (v < 0.0 || v > 2.0)
            throw std::invalid_argument("sweep: mu grid outside [0, 2]");
    ex.sim = sim_from_json(j.value("sim", json::object()));
    ex.weights = weights_from_json(j.value("weights", json::object()));
    ex.replicates = j.value("replicates", 5);
    ex.seed = j.value<std::uint64_t>("seed", 42);
    if (ex.replicates < 1) throw std::invalid_argument("sweep: replicates < 1");
    return ex;
}

ChannelAuditExperiment channel_audit_from_json(const json& j) {
    ChannelAuditExperiment ex;
    ex.channel = channel_from_json(j.at("channel"));
    ex.packets = j.value("packets", 100000);
    ex.ts = j.value("ts", 0.01);
    ex.histogram_bins = j.value("histogram_bins", 20);
    ex.seed = j.value<std::uint64_t>("seed", 42);
    if (ex.packets < 1) throw std::invalid_argument("audit: packets < 1");
    if (ex.ts <= 0.0) throw std::invalid_argument("audit: ts must be positive");
    return ex;
}

DegradationStudy degradation_study_from_json(const json& j) {
    DegradationStudy st;
    st.plant = plant_from_json(j.at("plant"));
    st.controller = controller_from_json(j.at("controller"));
    st.sim = sim_from_json(j.value("sim", json::object()));
    st.weights = weights_from_json(j.value("weights", json::object()));
    st.delay_bounds = grid_from_json(j.at("delay_bounds"));
    st.drop_prob = j.value("drop_prob", 0.0);
    st.replicates = j.value("replicates", 20);
    st.seed = j.value<std::uint64_t>("seed", 42);
    if (st.replicates < 1) throw std::invalid_argument("study: replicates < 1");
    return st;
}

BufferStudy buffer_study_from_json(const json& j) {
    BufferStudy st;
    st.plant = plant_from_json(j.at("plant"));
    st.controller = controller_from_json(j.at("controller"));
    st.sim = sim_from_json(j.value("sim", json::object()));
    st.weights = weights_from_json(j.value("weights", json::object()));
    st.replicates = j.value("replicates", 20);
    st.seed = j.value<std::uint64_t>("seed", 42);
    if (st.replicates < 1) throw std::invalid_argument("study: replicates < 1");
    return st;
}

RobustnessStudy robustness_study_from_json(const json& j) {
    RobustnessStudy st;
    st.plant = plant_from_json(j.at("plant"));
    st.controller = controller_from_json(j.at("controller"));
    st.sim = sim_from_json(j.value("sim", json::object()));
    st.weights = weights_from_json(j.value("weights", json::object()));
    for (const json& law : j.at("laws"))
        st.laws.push_back(delay_law_from_json(law));
    if (st.laws.empty()) throw std::invalid_argument("study: no delay laws");
    st.replicates = j.value("replicates", 20);
    st.seed = j.value<std::uint64_t>("seed", 42);
    if (st.replicates < 1) throw std::invalid_argument("study: replicates < 1");
    return st;
}

}  // namespace ncstune
