#include "ncstune/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncstune/parallel.hpp"

namespace ncstune {

namespace {

void check_box(const SearchBox& box) {
    if (box.lo.size() != box.hi.size() || box.lo.empty())
        throw std::invalid_argument("search box: mismatched or empty bounds");
    for (std::size_t j = 0; j < box.lo.size(); ++j)
        if (!(box.lo[j] < box.hi[j]))
            throw std::invalid_argument("search box: lower must be < upper");
}

void clamp_to_box(std::vector<double>& x, const SearchBox& box) {
    for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = std::clamp(x[j], box.lo[j], box.hi[j]);
}

std::vector<std::vector<double>> init_population(int n, const SearchBox& box,
                                                 RngStream& rng) {
    std::vector<std::vector<double>> pop(static_cast<std::size_t>(n));
    for (auto& x : pop) {
        x.resize(box.dim());
        for (std::size_t j = 0; j < box.dim(); ++j)
            x[j] = rng.uniform(box.lo[j], box.hi[j]);
    }
    return pop;
}

std::size_t best_index(const std::vector<double>& costs) {
    return static_cast<std::size_t>(
        std::min_element(costs.begin(), costs.end()) - costs.begin());
}

}  // namespace

std::vector<double> de_mutate(DeVariant variant, double f,
                              std::span<const double> x_i,
                              std::span<const double> best,
                              std::span<const double> x_r0,
                              std::span<const double> x_r1,
                              std::span<const double> x_r2, RngStream& rng,
                              double generation_dither) {
    const std::size_t dim = x_r1.size();
    std::vector<double> v(dim);
    switch (variant) {
        case DeVariant::kRand1:
            for (std::size_t j = 0; j < dim; ++j)
                v[j] = x_r0[j] + f * (x_r1[j] - x_r2[j]);
            break;
        case DeVariant::kLocalToBest1:
            for (std::size_t j = 0; j < dim; ++j)
                v[j] = x_i[j] + f * (best[j] - x_i[j]) + f * (x_r1[j] - x_r2[j]);
            break;
        case DeVariant::kBest1Jitter:
            for (std::size_t j = 0; j < dim; ++j) {
                const double fj = f + 0.0001 * rng.uniform01();
                v[j] = best[j] + fj * (x_r1[j] - x_r2[j]);
            }
            break;
        case DeVariant::kRand1VectorDither: {
            const double dither = f + rng.uniform01() * (1.0 - f);
            for (std::size_t j = 0; j < dim; ++j)
                v[j] = x_r0[j] + dither * (x_r1[j] - x_r2[j]);
            break;
        }
        case DeVariant::kRand1GenerationDither:
            for (std::size_t j = 0; j < dim; ++j)
                v[j] = x_r0[j] + generation_dither * (x_r1[j] - x_r2[j]);
            break;
    }
    return v;
}

OptResult de_optimize(const Objective& objective, const SearchBox& box,
                      const DEConfig& cfg, std::uint64_t seed, int jobs) {
    check_box(box);
    if (cfg.np < 4)
        throw std::invalid_argument("de: population must be at least 4");
    if (!(cfg.f > 0.0 && cfg.f <= 2.0))
        throw std::invalid_argument("de: f outside (0, 2]");
    if (cfg.cr < 0.0 || cfg.cr > 1.0)
        throw std::invalid_argument("de: cr outside [0, 1]");
    if (cfg.g_max < 0) throw std::invalid_argument("de: negative g_max");

    const std::size_t dim = box.dim();
    const std::size_t np = static_cast<std::size_t>(cfg.np);
    RngStream rng(derive_seed(seed, kStreamOptimizer));
    std::uint64_t eval_counter = 0;
    const auto next_eval_seed = [&] {
        return derive_seed(seed, kStreamEval, eval_counter++);
    };

    auto pop = init_population(cfg.np, box, rng);
    std::vector<double> costs(np);
    {
        std::vector<std::uint64_t> seeds(np);
        for (auto& s : seeds) s = next_eval_seed();
        parallel_for(np, jobs, [&](std::size_t i) {
            costs[i] = objective(pop[i], seeds[i]);
        });
    }

    OptResult out;
    out.history.reserve(static_cast<std::size_t>(cfg.g_max) + 1);
    out.history.push_back(costs[best_index(costs)]);

    std::vector<std::vector<double>> trials(np);
    std::vector<double> trial_costs(np);
    std::vector<std::uint64_t> trial_seeds(np);

    for (int g = 0; g < cfg.g_max; ++g) {
        const std::size_t ib = best_index(costs);
        const double gen_dither =
            cfg.variant == DeVariant::kRand1GenerationDither
                ? cfg.f + rng.uniform01() * (1.0 - cfg.f)
                : 0.0;

        // all randomness drawn serially, in population order
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r0, r1, r2;
            do r0 = rng.below(np); while (r0 == i);
            do r1 = rng.below(np); while (r1 == i || r1 == r0);
            do r2 = rng.below(np); while (r2 == i || r2 == r0 || r2 == r1);

            std::vector<double> v =
                de_mutate(cfg.variant, cfg.f, pop[i], pop[ib], pop[r0], pop[r1],
                          pop[r2], rng, gen_dither);

            // binomial crossover with one forced mutant component
            const std::size_t jrand = rng.below(dim);
            std::vector<double> trial = pop[i];
            for (std::size_t j = 0; j < dim; ++j) {
                const double u = rng.uniform01();
                if (u < cfg.cr || j == jrand) trial[j] = v[j];
            }
            clamp_to_box(trial, box);
            trials[i] = std::move(trial);
            trial_seeds[i] = next_eval_seed();
        }

        parallel_for(np, jobs, [&](std::size_t i) {
            trial_costs[i] = objective(trials[i], trial_seeds[i]);
        });

        for (std::size_t i = 0; i < np; ++i) {
            // ties move: on a flat penalty plateau the population keeps
            // drifting instead of freezing on its initial draw
            if (trial_costs[i] <= costs[i]) {
                pop[i] = std::move(trials[i]);
                costs[i] = trial_costs[i];
            }
        }
        out.history.push_back(costs[best_index(costs)]);
    }

    const std::size_t ib = best_index(costs);
    out.best_params = pop[ib];
    out.best_cost = costs[ib];
    out.evaluations = static_cast<long long>(np) * (cfg.g_max + 1);
    return out;
}

OptResult ga_optimize(const Objective& objective, const SearchBox& box,
                      const GAConfig& cfg, std::uint64_t seed, int jobs) {
    check_box(box);
    if (cfg.pop < 2) throw std::invalid_argument("ga: population too small");
    if (cfg.elite_count < 0 || cfg.elite_count >= cfg.pop)
        throw std::invalid_argument("ga: elite_count must be < pop");
    if (cfg.crossover_fraction < 0.0 || cfg.crossover_fraction > 1.0 ||
        cfg.mutation_fraction < 0.0 || cfg.mutation_fraction > 1.0)
        throw std::invalid_argument("ga: fractions outside [0, 1]");
    if (cfg.g_max < 0) throw std::invalid_argument("ga: negative g_max");

    const std::size_t dim = box.dim();
    const std::size_t np = static_cast<std::size_t>(cfg.pop);
    const std::size_t elites = static_cast<std::size_t>(cfg.elite_count);
    RngStream rng(derive_seed(seed, kStreamOptimizer));
    std::uint64_t eval_counter = 0;
    const auto next_eval_seed = [&] {
        return derive_seed(seed, kStreamEval, eval_counter++);
    };

    auto pop = init_population(cfg.pop, box, rng);
    std::vector<double> costs(np);
    {
        std::vector<std::uint64_t> seeds(np);
        for (auto& s : seeds) s = next_eval_seed();
        parallel_for(np, jobs, [&](std::size_t i) {
            costs[i] = objective(pop[i], seeds[i]);
        });
    }

    OptResult out;
    out.history.reserve(static_cast<std::size_t>(cfg.g_max) + 1);
    out.history.push_back(costs[best_index(costs)]);
    out.evaluations = static_cast<long long>(np);

    const std::size_t n_children = np - elites;
    const std::size_t n_cross = static_cast<std::size_t>(
        std::llround(cfg.crossover_fraction * static_cast<double>(n_children)));
    const std::size_t n_mut = std::min(
        n_children - n_cross,
        static_cast<std::size_t>(std::llround(
            cfg.mutation_fraction * static_cast<double>(n_children))));

    const auto tournament = [&]() -> std::size_t {
        const std::size_t a = rng.below(np);
        const std::size_t b = rng.below(np);
        return costs[b] < costs[a] ? b : a;
    };

    std::vector<std::vector<double>> children(n_children);
    std::vector<double> child_costs(n_children);
    std::vector<std::uint64_t> child_seeds(n_children);

    for (int g = 0; g < cfg.g_max; ++g) {
        // elite indices by stored cost (stable for reproducibility)
        std::vector<std::size_t> order(np);
        for (std::size_t i = 0; i < np; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return costs[a] < costs[b];
        });

        for (std::size_t c = 0; c < n_children; ++c) {
            const std::size_t p1 = tournament();
            std::vector<double> child;
            if (c < n_cross) {
                // BLX-0.5: sample uniformly from the blended interval
                const std::size_t p2 = tournament();
                child.resize(dim);
                for (std::size_t j = 0; j < dim; ++j) {
                    const double a = std::min(pop[p1][j], pop[p2][j]);
                    const double b = std::max(pop[p1][j], pop[p2][j]);
                    const double ext = 0.5 * (b - a);
                    child[j] = rng.uniform(a - ext, b + ext);
                }
            } else if (c < n_cross + n_mut) {
                child = pop[p1];
                for (std::size_t j = 0; j < dim; ++j)
                    child[j] += rng.normal(0.0, 0.1 * (box.hi[j] - box.lo[j]));
            } else {
                child = pop[p1];
            }
            clamp_to_box(child, box);
            children[c] = std::move(child);
            child_seeds[c] = next_eval_seed();
        }

        parallel_for(n_children, jobs, [&](std::size_t c) {
            child_costs[c] = objective(children[c], child_seeds[c]);
        });
        out.evaluations += static_cast<long long>(n_children);

        // next generation: elites keep their stored costs, no re-evaluation
        std::vector<std::vector<double>> next_pop(np);
        std::vector<double> next_costs(np);
        for (std::size_t k = 0; k < elites; ++k) {
            next_pop[k] = pop[order[k]];
            next_costs[k] = costs[order[k]];
        }
        for (std::size_t c = 0; c < n_children; ++c) {
            next_pop[elites + c] = std::move(children[c]);
            next_costs[elites + c] = child_costs[c];
        }
        pop = std::move(next_pop);
        costs = std::move(next_costs);
        out.history.push_back(costs[best_index(costs)]);
    }

    const std::size_t ib = best_index(costs);
    out.best_params = pop[ib];
    out.best_cost = costs[ib];
    return out;
}

SearchBox default_box(TuneMode mode) {
    SearchBox box;
    box.lo = {0.0, 0.0, 0.0};
    box.hi = {100.0, 100.0, 100.0};
    if (mode == TuneMode::kFopid) {
        box.lo.insert(box.lo.end(), {0.0, 0.0});
        box.hi.insert(box.hi.end(), {2.0, 2.0});
    }
    return box;
}

ControllerParams decode_params(TuneMode mode, std::span<const double> x) {
    ControllerParams p;
    p.kp = x[0];
    p.ki = x[1];
    p.kd = x[2];
    if (mode == TuneMode::kFopid) {
        p.lambda = x[3];
        p.mu = x[4];
    } else {
        p.lambda = 1.0;
        p.mu = 1.0;
    }
    return p;
}

TuneResult tune_controller(const DelayedRationalPlant& plant,
                           const TuneSetup& setup, std::uint64_t seed) {
    SearchBox box = setup.box;
    if (box.lo.empty()) box = default_box(setup.mode);
    const std::size_t want = setup.mode == TuneMode::kPid ? 3 : 5;
    if (box.dim() != want)
        throw std::invalid_argument("tune: box dimension does not match mode");

    const Objective objective = [&](std::span<const double> x,
                                    std::uint64_t eval_seed) {
        const ControllerParams p = decode_params(setup.mode, x);
        // replicates run serially here; parallelism lives at population level
        return expected_cost(plant, p, setup.sim, setup.weights,
                             setup.replicates, eval_seed, 1)
            .mean.j;
    };

    TuneResult result;
    if (std::holds_alternative<DEConfig>(setup.optimizer)) {
        result.opt = de_optimize(objective, box, std::get<DEConfig>(setup.optimizer),
                                 seed, setup.jobs);
    } else {
        result.opt = ga_optimize(objective, box, std::get<GAConfig>(setup.optimizer),
                                 seed, setup.jobs);
    }
    result.params = decode_params(setup.mode, result.opt.best_params);
    return result;
}

}  // namespace ncstune
