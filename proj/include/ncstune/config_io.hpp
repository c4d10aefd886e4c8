#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ncstune/network.hpp"
#include "ncstune/optimize.hpp"
#include "ncstune/oustaloup.hpp"
#include "ncstune/plants.hpp"
#include "ncstune/simloop.hpp"

namespace ncstune {

using json = nlohmann::json;

/// Controller parameters plus the synthesis band for its fractional branches.
struct ControllerSpec {
    ControllerParams params;
    double omega_b = 1e-2;
    double omega_h = 1e2;
    int n_half = 2;

    StateSpaceModel to_statespace() const;
};

/// Parses a file and rethrows parse failures with the path in the message.
json load_json_file(const std::string& path);

// JSON <-> domain types. Schema violations surface as exceptions whose
// message names the offending key; semantic violations (bad bounds, unknown
// preset) throw std::invalid_argument.
DelayLaw delay_law_from_json(const json& j);
json delay_law_to_json(const DelayLaw& law);
const char* delay_law_name(const DelayLaw& law);

ChannelConfig channel_from_json(const json& j);
json channel_to_json(const ChannelConfig& cfg);

/// {"preset": "p1_fodup" | "p2_sodup" | "lag_foptd" | "delay_foptd"} or the
/// generic {"gain", "dead_time", "num", "den"} form.
DelayedRationalPlant plant_from_json(const json& j);

ControllerSpec controller_from_json(const json& j);
json controller_to_json(const ControllerSpec& c);

SimConfig sim_from_json(const json& j);
CostWeights weights_from_json(const json& j);

/// Accepts an explicit array of values or {"min", "max", "points"}.
std::vector<double> grid_from_json(const json& j);

// ---- experiment configs, one per subcommand ----

struct TuneExperiment {
    DelayedRationalPlant plant;
    std::string algorithm;  // name as written in the config
    TuneSetup setup;
    std::uint64_t seed = 42;
};
TuneExperiment tune_experiment_from_json(const json& j);

struct SimulateExperiment {
    DelayedRationalPlant plant;
    ControllerSpec controller;
    SimConfig sim;
    CostWeights weights;
    std::uint64_t seed = 42;
};
SimulateExperiment simulate_experiment_from_json(const json& j);

struct SweepExperiment {
    DelayedRationalPlant plant;
    ControllerParams gains;  // lambda/mu supplied by the grid
    std::vector<double> lambda_grid;
    std::vector<double> mu_grid;
    SimConfig sim;
    CostWeights weights;
    int replicates = 5;
    std::uint64_t seed = 42;
};
SweepExperiment sweep_experiment_from_json(const json& j);

struct ChannelAuditExperiment {
    ChannelConfig channel;
    int packets = 100000;
    double ts = 0.01;
    int histogram_bins = 20;
    std::uint64_t seed = 42;
};
ChannelAuditExperiment channel_audit_from_json(const json& j);

/// At each bound d: the lumped model (d folded into the plant's dead time,
/// no network) versus the real network (uniform(0, d) plus drops, both
/// channels).
struct DegradationStudy {
    DelayedRationalPlant plant;
    ControllerSpec controller;
    SimConfig sim;  // per-condition delay laws override its channels
    CostWeights weights;
    std::vector<double> delay_bounds;
    double drop_prob = 0.0;
    int replicates = 20;
    std::uint64_t seed = 42;
};
DegradationStudy degradation_study_from_json(const json& j);

/// The same loop with the receive-side stamp filtering on versus off.
struct BufferStudy {
    DelayedRationalPlant plant;
    ControllerSpec controller;
    SimConfig sim;
    CostWeights weights;
    int replicates = 20;
    std::uint64_t seed = 42;
};
BufferStudy buffer_study_from_json(const json& j);

/// The same loop under alternative delay laws on both channels.
struct RobustnessStudy {
    DelayedRationalPlant plant;
    ControllerSpec controller;
    SimConfig sim;
    CostWeights weights;
    std::vector<DelayLaw> laws;
    int replicates = 20;
    std::uint64_t seed = 42;
};
RobustnessStudy robustness_study_from_json(const json& j);

}  // namespace ncstune
