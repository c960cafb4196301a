#include "dsekit/sway.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace dsekit {

double sway_distance(const DecisionSpace& space, const Solution& a, const Solution& b,
                     SwayDistance kind) {
    if (a.values.size() != space.size() || b.values.size() != space.size())
        throw std::invalid_argument("sway_distance: arity mismatch");
    if (kind == SwayDistance::auto_select)
        kind = space.all_boolean() ? SwayDistance::hamming : SwayDistance::euclidean;

    if (kind == SwayDistance::hamming) {
        double differing = 0;
        for (std::size_t d = 0; d < space.size(); ++d)
            if (!(a.values[d] == b.values[d])) differing += 1;
        return differing;
    }

    double sum = 0.0;
    for (std::size_t d = 0; d < space.size(); ++d) {
        const auto& kindd = space[d].kind;
        double diff;
        if (const auto* c = std::get_if<ContinuousKind>(&kindd)) {
            diff = (std::get<double>(a.values[d]) - std::get<double>(b.values[d])) /
                   (c->hi - c->lo);
        } else if (const auto* i = std::get_if<IntegerKind>(&kindd)) {
            diff = static_cast<double>(std::get<long long>(a.values[d]) -
                                       std::get<long long>(b.values[d])) /
                   static_cast<double>(i->hi - i->lo);
        } else {
            diff = a.values[d] == b.values[d] ? 0.0 : 1.0;  // boolean or categorical
        }
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

FastmapSplit fastmap_split(const DecisionSpace& space, std::span<const Solution> pop,
                           SwayDistance distance, SeededRng& rng) {
    if (pop.size() < 2) throw std::invalid_argument("fastmap_split: needs >= 2 members");
    const auto dist = [&](std::size_t i, std::size_t j) {
        return sway_distance(space, pop[i], pop[j], distance);
    };
    const auto farthest_from = [&](std::size_t origin) {
        std::size_t best = origin == 0 ? 1 : 0;
        double best_d = dist(origin, best);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (i == origin) continue;
            const double d = dist(origin, i);
            if (d > best_d) {
                best = i;
                best_d = d;
            }
        }
        return best;
    };

    FastmapSplit split;
    const std::size_t pivot = rng.pick(pop.size());
    split.east_pole = farthest_from(pivot);
    split.west_pole = farthest_from(split.east_pole);
    const double axis = dist(split.west_pole, split.east_pole);

    std::vector<std::size_t> order(pop.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    if (axis <= 0.0) {
        split.degenerate = true;  // indistinguishable points; halve arbitrarily
    } else {
        // Cosine-rule projection onto the west-east axis.
        std::vector<double> projection(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) {
            const double dw = dist(split.west_pole, i);
            const double de = dist(split.east_pole, i);
            projection[i] = (dw * dw + axis * axis - de * de) / (2.0 * axis);
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return projection[a] < projection[b]; });
    }

    const std::size_t west_size = (pop.size() + 1) / 2;
    split.west_half.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(west_size));
    split.east_half.assign(order.begin() + static_cast<std::ptrdiff_t>(west_size), order.end());
    return split;
}

RunResult sway(const Problem& problem, const SwayParams& params, int budget_evals,
               std::uint64_t seed) {
    if (params.initial_size < 2) throw std::invalid_argument("sway: initial_size must be >= 2");
    int enough = params.enough;
    if (enough == 0)
        enough = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(params.initial_size))));
    if (enough < 2) throw std::invalid_argument("sway: enough must be >= 2");
    if (params.initial_size <= enough)
        throw std::invalid_argument("sway: initial_size must exceed enough");

    Budget budget(budget_evals);
    Evaluator eval(problem, budget);
    SeededRng rng(seed);
    RunResult result;
    result.seed = seed;
    result.config_echo = {
        {"algorithm", "sway"},
        {"initial_size", std::to_string(params.initial_size)},
        {"enough", std::to_string(enough)},
        {"distance",
         params.distance == SwayDistance::hamming
             ? "hamming"
             : (params.distance == SwayDistance::euclidean ? "euclidean" : "auto")},
        {"representatives",
         params.representatives == SwayRepresentative::poles ? "poles" : "random"}};

    // Candidate generation is evaluation-free: uniform over the space, or
    // drawn from the finite pool when the problem has one.
    std::vector<Solution> candidates;
    candidates.reserve(static_cast<std::size_t>(params.initial_size));
    if (problem.pool) {
        const auto& pool = *problem.pool;
        if (pool.size() <= static_cast<std::size_t>(params.initial_size)) {
            candidates = pool;
            rng.shuffle(candidates);
        } else {
            std::vector<std::size_t> order(pool.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            rng.shuffle(order);
            for (int i = 0; i < params.initial_size; ++i)
                candidates.push_back(pool[order[static_cast<std::size_t>(i)]]);
        }
    } else {
        for (int i = 0; i < params.initial_size; ++i)
            candidates.push_back(random_solution(problem.space, rng));
    }

    // Each candidate is evaluated at most once per run.
    std::vector<std::optional<EvaluatedSolution>> evaluated(candidates.size());
    bool truncated = false;
    const auto evaluate_candidate = [&](std::size_t idx) -> const EvaluatedSolution* {
        if (!evaluated[idx]) {
            if (eval.exhausted()) {
                truncated = true;
                return nullptr;
            }
            evaluated[idx] = eval.evaluate(candidates[idx]);
            result.archive.insert(*evaluated[idx]);
        }
        return &*evaluated[idx];
    };

    const auto pick_representative = [&](const std::vector<std::size_t>& half,
                                         std::size_t pole) -> std::size_t {
        if (params.representatives == SwayRepresentative::poles) return pole;
        return half[rng.pick(half.size())];
    };

    const auto snapshot_trace = [&] {
        result.trace.push_back({eval.used(), result.archive.objectives()});
    };

    // Recursive prune: clusters of size <= enough are leaves and are
    // evaluated wholesale.
    const std::function<void(std::vector<std::size_t>)> recurse =
        [&](std::vector<std::size_t> cluster) {
            if (truncated) return;
            if (cluster.size() <= static_cast<std::size_t>(enough)) {
                for (std::size_t idx : cluster) {
                    if (!evaluate_candidate(idx)) return;
                }
                snapshot_trace();
                return;
            }
            std::vector<Solution> members;
            members.reserve(cluster.size());
            for (std::size_t idx : cluster) members.push_back(candidates[idx]);
            const FastmapSplit split = fastmap_split(problem.space, members, params.distance, rng);

            const std::size_t west_rep =
                cluster[pick_representative(split.west_half, split.west_pole)];
            const std::size_t east_rep =
                cluster[pick_representative(split.east_half, split.east_pole)];
            const EvaluatedSolution* west = evaluate_candidate(west_rep);
            if (!west) return;
            const EvaluatedSolution* east = evaluate_candidate(east_rep);
            if (!east) return;

            std::vector<std::size_t> west_cluster, east_cluster;
            west_cluster.reserve(split.west_half.size());
            east_cluster.reserve(split.east_half.size());
            for (std::size_t pos : split.west_half) west_cluster.push_back(cluster[pos]);
            for (std::size_t pos : split.east_half) east_cluster.push_back(cluster[pos]);

            if (dominates(west->objectives, east->objectives)) {
                recurse(std::move(west_cluster));
            } else if (dominates(east->objectives, west->objectives)) {
                recurse(std::move(east_cluster));
            } else {
                recurse(std::move(west_cluster));
                recurse(std::move(east_cluster));
            }
        };

    std::vector<std::size_t> all(candidates.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    recurse(std::move(all));

    result.evals_used = eval.used();
    result.truncated = truncated;
    if (result.trace.empty() || result.trace.back().eval_index != eval.used())
        result.trace.push_back({eval.used(), result.archive.objectives()});
    return result;
}

}  // namespace dsekit
