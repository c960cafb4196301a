#include "dsekit/optimizers.hpp"

#include <algorithm>
#include <cmath>

namespace dsekit {

namespace {

std::vector<ObjectiveVector> archive_front(const ParetoArchive& archive) {
    return archive.objectives();
}

void snapshot(RunResult& result, int eval_index) {
    result.trace.push_back({eval_index, archive_front(result.archive)});
}

std::string fmt(double v) {
    std::string s = std::to_string(v);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// Arithmetic view of a solution for DE-style vector math.
double numeric_of(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* i = std::get_if<long long>(&v)) return static_cast<double>(*i);
    throw std::invalid_argument("decision is not numeric");
}

Value numeric_to_value(const DecisionKind& kind, double x) {
    if (const auto* c = std::get_if<ContinuousKind>(&kind)) return clamp(x, c->lo, c->hi);
    const auto& ik = std::get<IntegerKind>(kind);
    const double rounded = std::nearbyint(x);
    return static_cast<long long>(
        clamp(rounded, static_cast<double>(ik.lo), static_cast<double>(ik.hi)));
}

Solution perturb_one_decision(const DecisionSpace& space, const Solution& base, double scale,
                              SeededRng& rng) {
    Solution neighbor = base;
    const std::size_t d = rng.pick(space.size());
    const auto& kind = space[d].kind;
    if (const auto* c = std::get_if<ContinuousKind>(&kind)) {
        const double step = rng.gaussian() * scale * (c->hi - c->lo);
        neighbor.values[d] = clamp(std::get<double>(base.values[d]) + step, c->lo, c->hi);
    } else if (const auto* i = std::get_if<IntegerKind>(&kind)) {
        const double step = rng.gaussian() * scale * static_cast<double>(i->hi - i->lo);
        const double moved = static_cast<double>(std::get<long long>(base.values[d])) + step;
        neighbor.values[d] = numeric_to_value(kind, moved);
    } else if (std::holds_alternative<BooleanKind>(kind)) {
        neighbor.values[d] = !std::get<bool>(base.values[d]);
    } else {
        const auto& cat = std::get<CategoricalKind>(kind);
        neighbor.values[d] = CatLevel{static_cast<std::int32_t>(rng.pick(cat.levels.size()))};
    }
    return neighbor;
}

}  // namespace

// ---- random search -----------------------------------------------------------

RunResult random_search(const Problem& problem, int budget_evals, std::uint64_t seed,
                        const RandomSearchParams& params) {
    Budget budget(budget_evals);
    Evaluator eval(problem, budget);
    SeededRng rng(seed);
    RunResult result;
    result.seed = seed;
    result.config_echo = {{"algorithm", "random_search"},
                          {"without_replacement", params.without_replacement ? "1" : "0"}};

    std::vector<std::size_t> order;
    if (problem.pool && params.without_replacement) {
        order.resize(problem.pool->size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
    }

    const int snap_every = std::max(1, budget_evals / 20);
    for (int i = 0; i < budget_evals; ++i) {
        Solution candidate;
        if (problem.pool && params.without_replacement) {
            if (static_cast<std::size_t>(i) >= order.size()) break;  // pool exhausted
            candidate = (*problem.pool)[order[static_cast<std::size_t>(i)]];
        } else if (problem.pool) {
            candidate = (*problem.pool)[rng.pick(problem.pool->size())];
        } else {
            candidate = random_solution(problem.space, rng);
        }
        result.archive.insert(eval.evaluate(candidate));
        if ((i + 1) % snap_every == 0 || i + 1 == budget_evals) snapshot(result, eval.used());
    }
    result.evals_used = eval.used();
    return result;
}

// ---- simulated annealing --------------------------------------------------------

RunResult simulated_annealing(const Problem& problem, int budget_evals, const SaParams& params,
                              std::uint64_t seed, std::size_t objective_index) {
    if (!(params.t0 > 0)) throw std::invalid_argument("sa: t0 must be > 0");
    if (!(params.alpha > 0 && params.alpha < 1))
        throw std::invalid_argument("sa: alpha must be in (0,1)");
    if (!(params.neighbor_scale > 0))
        throw std::invalid_argument("sa: neighbor_scale must be > 0");
    if (objective_index >= problem.num_objectives)
        throw std::invalid_argument("sa: objective index out of range");

    Budget budget(budget_evals);
    Evaluator eval(problem, budget);
    SeededRng rng(seed);
    RunResult result;
    result.seed = seed;
    result.config_echo = {{"algorithm", "sa"},
                          {"t0", fmt(params.t0)},
                          {"alpha", fmt(params.alpha)},
                          {"neighbor_scale", fmt(params.neighbor_scale)},
                          {"objective_index", std::to_string(objective_index)}};

    EvaluatedSolution current = eval.evaluate(random_solution(problem.space, rng));
    EvaluatedSolution best = current;
    result.trace.push_back({best.eval_index, {best.objectives}});

    double temperature = params.t0;
    while (!eval.exhausted()) {
        const Solution proposal =
            perturb_one_decision(problem.space, current.solution, params.neighbor_scale, rng);
        const EvaluatedSolution candidate = eval.evaluate(proposal);
        const double delta = candidate.objectives[objective_index] -
                             current.objectives[objective_index];
        if (delta <= 0 || rng.uniform01() < std::exp(-delta / temperature)) current = candidate;
        if (current.objectives[objective_index] < best.objectives[objective_index]) {
            best = current;
            result.trace.push_back({best.eval_index, {best.objectives}});
        }
        temperature *= params.alpha;
    }

    result.archive.insert(best);
    result.evals_used = eval.used();
    return result;
}

// ---- differential evolution -------------------------------------------------------

RunResult differential_evolution(const Problem& problem, int budget_evals, const DeParams& params,
                                 std::uint64_t seed, std::size_t objective_index) {
    if (!problem.space.all_numeric())
        throw std::invalid_argument("de: supports continuous/integer decision spaces only");
    if (!(params.f >= 0 && params.f <= 2)) throw std::invalid_argument("de: f must be in [0,2]");
    if (!(params.cr >= 0 && params.cr <= 1))
        throw std::invalid_argument("de: cr must be in [0,1]");
    if (objective_index >= problem.num_objectives)
        throw std::invalid_argument("de: objective index out of range");

    const std::size_t dims = problem.space.size();
    int np = params.np;
    if (np == 0)
        np = std::max(4, std::min(static_cast<int>(10 * dims), budget_evals / 10));
    if (np < 4) throw std::invalid_argument("de: np must be >= 4");
    if (np > budget_evals)
        throw std::invalid_argument("de: population does not fit the initialization budget");

    Budget budget(budget_evals);
    Evaluator eval(problem, budget);
    SeededRng rng(seed);
    RunResult result;
    result.seed = seed;
    result.config_echo = {{"algorithm", "de"},
                          {"np", std::to_string(np)},
                          {"f", fmt(params.f)},
                          {"cr", fmt(params.cr)},
                          {"objective_index", std::to_string(objective_index)}};

    std::vector<EvaluatedSolution> pop;
    pop.reserve(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) pop.push_back(eval.evaluate(random_solution(problem.space, rng)));

    const auto value_of = [&](const EvaluatedSolution& e) { return e.objectives[objective_index]; };
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (value_of(pop[i]) < value_of(pop[best])) best = i;
    result.trace.push_back({pop[best].eval_index, {pop[best].objectives}});

    while (!eval.exhausted()) {
        for (std::size_t i = 0; i < pop.size() && !eval.exhausted(); ++i) {
            // Three distinct peers, all different from the target.
            std::size_t a, b, c;
            do a = rng.pick(pop.size());
            while (a == i);
            do b = rng.pick(pop.size());
            while (b == i || b == a);
            do c = rng.pick(pop.size());
            while (c == i || c == a || c == b);

            Solution trial = pop[i].solution;
            const std::size_t forced = rng.pick(dims);
            for (std::size_t d = 0; d < dims; ++d) {
                if (d == forced || rng.uniform01() < params.cr) {
                    const double mutant = numeric_of(pop[a].solution.values[d]) +
                                          params.f * (numeric_of(pop[b].solution.values[d]) -
                                                      numeric_of(pop[c].solution.values[d]));
                    trial.values[d] = numeric_to_value(problem.space[d].kind, mutant);
                }
            }
            const EvaluatedSolution candidate = eval.evaluate(trial);
            if (value_of(candidate) <= value_of(pop[i])) pop[i] = candidate;
            if (value_of(pop[i]) < value_of(pop[best])) {
                best = i;
                result.trace.push_back({pop[i].eval_index, {pop[i].objectives}});
            }
        }
    }

    result.archive.insert(pop[best]);
    result.evals_used = eval.used();
    return result;
}

// ---- multi-objective GA ---------------------------------------------------------------

namespace {

Solution sbx_uniform_crossover(const DecisionSpace& space, const Solution& p1, const Solution& p2,
                               double eta, SeededRng& rng) {
    Solution child = p1;
    for (std::size_t d = 0; d < space.size(); ++d) {
        const auto& kind = space[d].kind;
        if (const auto* c = std::get_if<ContinuousKind>(&kind)) {
            // Simulated binary crossover, one child kept.
            const double x1 = std::get<double>(p1.values[d]);
            const double x2 = std::get<double>(p2.values[d]);
            if (rng.coin()) {
                child.values[d] = clamp(x2, c->lo, c->hi);
                continue;
            }
            const double u = rng.uniform01();
            const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                                         : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
            const double value = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2);
            child.values[d] = clamp(value, c->lo, c->hi);
        } else if (rng.coin()) {
            child.values[d] = p2.values[d];  // uniform crossover gene swap
        }
    }
    return child;
}

void mutate(const DecisionSpace& space, Solution& s, double mutation_prob, double eta,
            SeededRng& rng) {
    for (std::size_t d = 0; d < space.size(); ++d) {
        if (rng.uniform01() >= mutation_prob) continue;
        const auto& kind = space[d].kind;
        if (const auto* c = std::get_if<ContinuousKind>(&kind)) {
            // Polynomial mutation.
            const double u = rng.uniform01();
            const double delta = u < 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0)) - 1.0
                                         : 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta + 1.0));
            const double value = std::get<double>(s.values[d]) + delta * (c->hi - c->lo);
            s.values[d] = clamp(value, c->lo, c->hi);
        } else if (const auto* i = std::get_if<IntegerKind>(&kind)) {
            s.values[d] = rng.uniform_int(i->lo, i->hi);
        } else if (std::holds_alternative<BooleanKind>(kind)) {
            s.values[d] = !std::get<bool>(s.values[d]);
        } else {
            const auto& cat = std::get<CategoricalKind>(kind);
            s.values[d] = CatLevel{static_cast<std::int32_t>(rng.pick(cat.levels.size()))};
        }
    }
}

}  // namespace

RunResult ga_multiobjective(const Problem& problem, int budget_evals, const GaParams& params,
                            std::uint64_t seed) {
    if (problem.num_objectives < 2)
        throw std::invalid_argument("ga: needs >= 2 objectives (use sa or de for one)");
    if (params.pop_size < 4 || params.pop_size % 2 != 0)
        throw std::invalid_argument("ga: pop_size must be even and >= 4");
    if (params.pop_size > budget_evals)
        throw std::invalid_argument("ga: pop_size exceeds the evaluation budget");
    if (!(params.crossover_prob >= 0 && params.crossover_prob <= 1))
        throw std::invalid_argument("ga: crossover_prob must be in [0,1]");
    if (params.mutation_prob > 1)
        throw std::invalid_argument("ga: mutation_prob must be in [0,1]");

    const double mutation_prob = params.mutation_prob >= 0
                                     ? params.mutation_prob
                                     : 1.0 / static_cast<double>(problem.space.size());

    Budget budget(budget_evals);
    Evaluator eval(problem, budget);
    SeededRng rng(seed);
    RunResult result;
    result.seed = seed;
    result.config_echo = {
        {"algorithm", "ga"},
        {"pop_size", std::to_string(params.pop_size)},
        {"selection", params.selection == SelectionKind::binary_dom ? "binary_dom" : "indicator_dom"},
        {"crossover_prob", fmt(params.crossover_prob)},
        {"mutation_prob", fmt(mutation_prob)},
        {"sbx_eta", fmt(params.sbx_eta)},
        {"pm_eta", fmt(params.pm_eta)}};

    std::vector<EvaluatedSolution> pop;
    pop.reserve(static_cast<std::size_t>(params.pop_size));
    for (int i = 0; i < params.pop_size; ++i) {
        pop.push_back(eval.evaluate(random_solution(problem.space, rng)));
        result.archive.insert(pop.back());
    }
    snapshot(result, eval.used());

    // Fitness on objectives normalized over the group being compared, so
    // the epsilon scale (kappa) means the same thing on every problem.
    const auto fitnesses = [&](const std::vector<EvaluatedSolution>& group) {
        std::vector<ObjectiveVector> objectives;
        objectives.reserve(group.size());
        for (const auto& g : group) objectives.push_back(g.objectives);
        const auto normalized = normalize_front(objectives);
        return indicator_fitnesses(normalized, params.kappa);
    };

    while (!eval.exhausted()) {
        const std::vector<double> pop_fitness =
            params.selection == SelectionKind::indicator_dom ? fitnesses(pop)
                                                             : std::vector<double>{};
        const auto tournament = [&]() -> const EvaluatedSolution& {
            const std::size_t a = rng.pick(pop.size());
            std::size_t b = rng.pick(pop.size());
            while (b == a) b = rng.pick(pop.size());
            if (params.selection == SelectionKind::binary_dom) {
                if (dominates(pop[a].objectives, pop[b].objectives)) return pop[a];
                if (dominates(pop[b].objectives, pop[a].objectives)) return pop[b];
                return rng.coin() ? pop[a] : pop[b];
            }
            if (pop_fitness[a] > pop_fitness[b]) return pop[a];
            if (pop_fitness[b] > pop_fitness[a]) return pop[b];
            return rng.coin() ? pop[a] : pop[b];
        };

        std::vector<EvaluatedSolution> combined = pop;
        for (int i = 0; i < params.pop_size && !eval.exhausted(); ++i) {
            const EvaluatedSolution& p1 = tournament();
            const EvaluatedSolution& p2 = tournament();
            Solution child = rng.uniform01() < params.crossover_prob
                                 ? sbx_uniform_crossover(problem.space, p1.solution, p2.solution,
                                                         params.sbx_eta, rng)
                                 : p1.solution;
            mutate(problem.space, child, mutation_prob, params.pm_eta, rng);
            combined.push_back(eval.evaluate(child));
            result.archive.insert(combined.back());
        }

        // Elitist truncation: non-dominated members first, then by indicator
        // fitness; ties shuffled so survival never depends on index order.
        std::vector<ObjectiveVector> objectives;
        objectives.reserve(combined.size());
        for (const auto& m : combined) objectives.push_back(m.objectives);
        std::vector<char> nondominated(combined.size(), 0);
        for (std::size_t i : nondominated_indices(objectives)) nondominated[i] = 1;
        const std::vector<double> fitness = fitnesses(combined);

        std::vector<std::size_t> order(combined.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (nondominated[x] != nondominated[y]) return nondominated[x] > nondominated[y];
            return fitness[x] > fitness[y];
        });

        std::vector<EvaluatedSolution> next;
        next.reserve(static_cast<std::size_t>(params.pop_size));
        for (int i = 0; i < params.pop_size; ++i) next.push_back(combined[order[static_cast<std::size_t>(i)]]);
        pop = std::move(next);
        snapshot(result, eval.used());
    }

    result.evals_used = eval.used();
    return result;
}

}  // namespace dsekit
