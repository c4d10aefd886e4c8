#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "ncstune/oustaloup.hpp"
#include "ncstune/plants.hpp"
#include "ncstune/rng.hpp"
#include "ncstune/simloop.hpp"

namespace ncstune {

struct SearchBox {
    std::vector<double> lo;
    std::vector<double> hi;
    std::size_t dim() const { return lo.size(); }
};

enum class DeVariant {
    kRand1,
    kLocalToBest1,
    kBest1Jitter,
    kRand1VectorDither,
    kRand1GenerationDither,
};

struct DEConfig {
    DeVariant variant = DeVariant::kRand1;
    int np = 20;       // population size
    int g_max = 200;   // generations
    double f = 0.85;   // difference scale factor
    double cr = 0.5;   // crossover probability
};

struct GAConfig {
    int pop = 20;
    int g_max = 200;
    double crossover_fraction = 0.8;
    double mutation_fraction = 0.2;
    int elite_count = 2;
};

struct OptResult {
    std::vector<double> best_params;
    double best_cost = 0.0;
    std::vector<double> history;  // best stored cost after each generation
    long long evaluations = 0;
};

/// Black-box objective. eval_seed identifies the evaluation; stochastic
/// objectives derive their replicate streams from it, deterministic ones
/// ignore it. Must not throw inside the box.
using Objective =
    std::function<double(std::span<const double>, std::uint64_t eval_seed)>;

/// One mutant vector. rng supplies only the draws the variant needs: one
/// dither for kRand1VectorDither, dim jitter factors for kBest1Jitter,
/// nothing otherwise. generation_dither is used by kRand1GenerationDither and
/// ignored by the rest.
std::vector<double> de_mutate(DeVariant variant, double f,
                              std::span<const double> x_i,
                              std::span<const double> best,
                              std::span<const double> x_r0,
                              std::span<const double> x_r1,
                              std::span<const double> x_r2, RngStream& rng,
                              double generation_dither);

/// Differential evolution with binomial crossover (one forced mutant
/// component), boundary clamping, and one-to-one selection that accepts ties
/// (so a flat penalty plateau cannot freeze the population). All random draws
/// happen serially on the coordinator; objective evaluations may run on
/// `jobs` threads without affecting the result.
OptResult de_optimize(const Objective& objective, const SearchBox& box,
                      const DEConfig& cfg, std::uint64_t seed, int jobs = 1);

/// Real-coded GA: tournament-2 selection, blend (BLX-0.5) crossover on a
/// crossover_fraction share of the offspring, Gaussian mutation (sd = 10% of
/// the box width per component) on a mutation_fraction share, remaining
/// offspring plain parent copies, and elite_count individuals carried
/// unchanged with their stored costs.
OptResult ga_optimize(const Objective& objective, const SearchBox& box,
                      const GAConfig& cfg, std::uint64_t seed, int jobs = 1);

enum class TuneMode { kPid, kFopid };

/// [0,100]^3 for the gains, plus [0,2]^2 for the orders in fopid mode.
SearchBox default_box(TuneMode mode);

/// pid mode: x = {Kp, Ki, Kd}, orders pinned at 1. fopid: x = all five.
ControllerParams decode_params(TuneMode mode, std::span<const double> x);

struct TuneSetup {
    TuneMode mode = TuneMode::kFopid;
    std::variant<DEConfig, GAConfig> optimizer = DEConfig{};
    SearchBox box;  // empty -> default_box(mode)
    SimConfig sim;
    CostWeights weights;
    int replicates = 5;  // averaging repeats inside the objective
    int jobs = 1;
};

struct TuneResult {
    ControllerParams params;
    OptResult opt;
};

/// Tunes a controller for the plant by minimizing the replicate-averaged
/// closed-loop cost. The objective seen by the optimizer is
/// expected_cost(...).mean.j at the evaluation's derived seed.
TuneResult tune_controller(const DelayedRationalPlant& plant,
                           const TuneSetup& setup, std::uint64_t seed);

}  // namespace ncstune
