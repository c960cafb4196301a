#pragma once

// Baseline and classic metaheuristics: random search, simulated annealing,
// differential evolution, and a generational multi-objective GA with binary
// or indicator domination.
//
// Every optimizer is deterministic given (problem, params, seed, budget);
// tie-breaks are resolved by RNG draws, never by index order.

#include "dsekit/core.hpp"
#include "dsekit/problems.hpp"

namespace dsekit {

struct TracePoint {
    int eval_index;
    std::vector<ObjectiveVector> front;  // archive snapshot at that point
};

struct RunResult {
    ParetoArchive archive;
    int evals_used = 0;
    std::vector<TracePoint> trace;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::uint64_t seed = 0;
    bool truncated = false;  // budget ran out before the strategy finished
};

struct RandomSearchParams {
    // With a finite pool, draw candidates without replacement (budget >=
    // pool size then scans the whole pool).
    bool without_replacement = false;
};

RunResult random_search(const Problem& problem, int budget, std::uint64_t seed,
                        const RandomSearchParams& params = {});

struct SaParams {
    double t0 = 1.0;              // initial temperature (objective assumed normalized-ish)
    double alpha = 0.99;          // geometric cooling factor, in (0,1)
    double neighbor_scale = 0.1;  // gaussian step as a fraction of the decision range
};

// Single-objective annealing of the chosen (canonical minimize) objective.
// Accept if better, else with probability exp(-delta/T); T decays
// geometrically per proposal. Archive holds just the best solution found.
RunResult simulated_annealing(const Problem& problem, int budget, const SaParams& params,
                              std::uint64_t seed, std::size_t objective_index = 0);

struct DeParams {
    int np = 0;        // population size; 0 means min(10 * dims, budget / 10), at least 4
    double f = 0.75;   // differential weight, in (0, 2]
    double cr = 0.3;   // crossover rate, in [0, 1]
};

// DE/rand/1/bin over continuous or integer spaces (integers round-and-clamp);
// single objective, greedy replacement, runs until the budget is exhausted.
RunResult differential_evolution(const Problem& problem, int budget, const DeParams& params,
                                 std::uint64_t seed, std::size_t objective_index = 0);

enum class SelectionKind { binary_dom, indicator_dom };

struct GaParams {
    int pop_size = 100;  // even, >= 4
    SelectionKind selection = SelectionKind::indicator_dom;
    double crossover_prob = 0.9;
    double mutation_prob = -1.0;  // negative means the 1/dims default
    double sbx_eta = 20.0;
    double pm_eta = 20.0;
    double kappa = 0.05;  // indicator fitness scale
};

// Generational GA: binary-tournament parent selection (dominance winner or
// higher indicator fitness), SBX + polynomial mutation on continuous
// decisions, uniform crossover + bit-flip/random-reset elsewhere, and
// elitist survivor truncation keeping non-dominated members first.
RunResult ga_multiobjective(const Problem& problem, int budget, const GaParams& params,
                            std::uint64_t seed);

}  // namespace dsekit
