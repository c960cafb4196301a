#include "dsekit/flash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dsekit {

double RegressionTree::predict(std::span<const double> row) const {
    if (nodes_.empty()) throw std::logic_error("predict on an empty tree");
    if (row.size() != categorical_.size())
        throw std::invalid_argument("predict: row arity does not match training arity");
    int at = 0;
    while (nodes_[static_cast<std::size_t>(at)].decision >= 0) {
        const Node& n = nodes_[static_cast<std::size_t>(at)];
        const double v = row[static_cast<std::size_t>(n.decision)];
        const bool go_left = n.category >= 0
                                 ? static_cast<std::int32_t>(v) == n.category
                                 : v <= n.threshold;
        at = go_left ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(at)].mean;
}

namespace {

struct SplitChoice {
    int decision = -1;
    double threshold = 0.0;
    std::int32_t category = -1;
    double children_sse = std::numeric_limits<double>::infinity();
};

}  // namespace

RegressionTree fit_tree(std::span<const std::vector<double>> rows, std::span<const double> targets,
                        const std::vector<bool>& categorical, int min_leaf) {
    if (rows.empty()) throw std::invalid_argument("fit_tree: empty training set");
    if (rows.size() != targets.size())
        throw std::invalid_argument("fit_tree: rows/targets size mismatch");
    if (min_leaf < 1) throw std::invalid_argument("fit_tree: min_leaf must be >= 1");
    const std::size_t dims = rows[0].size();
    if (categorical.size() != dims)
        throw std::invalid_argument("fit_tree: categorical mask arity mismatch");
    for (const auto& r : rows)
        if (r.size() != dims) throw std::invalid_argument("fit_tree: ragged rows");

    RegressionTree tree;
    tree.min_leaf_ = min_leaf;
    tree.categorical_ = categorical;

    // Recursive builder over row-index subsets.
    const std::function<int(std::vector<std::size_t>)> build =
        [&](std::vector<std::size_t> members) -> int {
        RegressionTree::Node node;
        node.count = static_cast<int>(members.size());
        double mean = 0.0;
        for (std::size_t r : members) mean += targets[r];
        mean /= static_cast<double>(members.size());
        node.mean = mean;
        double sse = 0.0;
        for (std::size_t r : members) {
            const double d = targets[r] - mean;
            sse += d * d;
        }

        const int node_id = static_cast<int>(tree.nodes_.size());
        tree.nodes_.push_back(node);
        if (members.size() < 2 * static_cast<std::size_t>(min_leaf) || sse <= 0.0) return node_id;

        // Best (decision, threshold/category) by weighted child SSE; scan
        // order (dimension, then ascending threshold) breaks exact ties.
        SplitChoice best;
        std::vector<std::size_t> sorted = members;
        for (std::size_t d = 0; d < dims; ++d) {
            if (categorical[d]) {
                std::vector<std::int32_t> levels;
                for (std::size_t r : members) {
                    const auto lvl = static_cast<std::int32_t>(rows[r][d]);
                    if (std::find(levels.begin(), levels.end(), lvl) == levels.end())
                        levels.push_back(lvl);
                }
                std::sort(levels.begin(), levels.end());
                if (levels.size() < 2) continue;
                for (const std::int32_t lvl : levels) {
                    double sum_in = 0.0, sum_sq_in = 0.0;
                    std::size_t n_in = 0;
                    double sum_all = 0.0, sum_sq_all = 0.0;
                    for (std::size_t r : members) {
                        const double t = targets[r];
                        sum_all += t;
                        sum_sq_all += t * t;
                        if (static_cast<std::int32_t>(rows[r][d]) == lvl) {
                            sum_in += t;
                            sum_sq_in += t * t;
                            ++n_in;
                        }
                    }
                    const std::size_t n_out = members.size() - n_in;
                    if (n_in < static_cast<std::size_t>(min_leaf) ||
                        n_out < static_cast<std::size_t>(min_leaf))
                        continue;
                    const double sse_in = sum_sq_in - sum_in * sum_in / static_cast<double>(n_in);
                    const double sum_out = sum_all - sum_in;
                    const double sse_out = (sum_sq_all - sum_sq_in) -
                                           sum_out * sum_out / static_cast<double>(n_out);
                    if (sse_in + sse_out < best.children_sse) {
                        best = {static_cast<int>(d), 0.0, lvl, sse_in + sse_out};
                    }
                }
            } else {
                std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                    return rows[a][d] < rows[b][d];
                });
                // Prefix sums let every split position cost O(1).
                double left_sum = 0.0, left_sq = 0.0;
                double total_sum = 0.0, total_sq = 0.0;
                for (std::size_t r : sorted) {
                    total_sum += targets[r];
                    total_sq += targets[r] * targets[r];
                }
                for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
                    const double t = targets[sorted[k]];
                    left_sum += t;
                    left_sq += t * t;
                    const double v = rows[sorted[k]][d];
                    const double v_next = rows[sorted[k + 1]][d];
                    if (v == v_next) continue;  // threshold must separate distinct values
                    const std::size_t n_l = k + 1;
                    const std::size_t n_r = sorted.size() - n_l;
                    if (n_l < static_cast<std::size_t>(min_leaf) ||
                        n_r < static_cast<std::size_t>(min_leaf))
                        continue;
                    const double right_sum = total_sum - left_sum;
                    const double right_sq = total_sq - left_sq;
                    const double sse_l = left_sq - left_sum * left_sum / static_cast<double>(n_l);
                    const double sse_r =
                        right_sq - right_sum * right_sum / static_cast<double>(n_r);
                    if (sse_l + sse_r < best.children_sse) {
                        best = {static_cast<int>(d), 0.5 * (v + v_next), -1, sse_l + sse_r};
                    }
                }
            }
        }

        if (best.decision < 0 || best.children_sse >= sse) return node_id;  // nothing helps

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : members) {
            const double v = rows[r][static_cast<std::size_t>(best.decision)];
            const bool go_left = best.category >= 0
                                     ? static_cast<std::int32_t>(v) == best.category
                                     : v <= best.threshold;
            (go_left ? left_rows : right_rows).push_back(r);
        }
        const int left_id = build(std::move(left_rows));
        const int right_id = build(std::move(right_rows));
        auto& stored = tree.nodes_[static_cast<std::size_t>(node_id)];
        stored.decision = best.decision;
        stored.threshold = best.threshold;
        stored.category = best.category;
        stored.left = left_id;
        stored.right = right_id;
        return node_id;
    };

    std::vector<std::size_t> all(rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    build(std::move(all));
    return tree;
}

RunResult flash(const Problem& problem, const FlashParams& params, int budget_evals,
                std::uint64_t seed) {
    if (!problem.pool) throw std::invalid_argument("flash: needs a finite candidate pool");
    const auto& pool = *problem.pool;
    if (params.init_samples < 1) throw std::invalid_argument("flash: init_samples must be >= 1");
    if (static_cast<std::size_t>(params.init_samples) > pool.size())
        throw std::invalid_argument("flash: pool smaller than init_samples");
    if (params.init_samples >= budget_evals)
        throw std::invalid_argument("flash: budget must exceed init_samples");
    if (static_cast<std::size_t>(budget_evals) > pool.size())
        throw std::invalid_argument("flash: budget exceeds the candidate pool size");

    Budget budget(budget_evals);
    Evaluator eval(problem, budget);
    SeededRng rng(seed);
    RunResult result;
    result.seed = seed;
    result.config_echo = {
        {"algorithm", "flash"},
        {"init_samples", std::to_string(params.init_samples)},
        {"acquisition", params.acquisition == Acquisition::dominance_count
                            ? "dominance_count"
                            : "single_objective_min"},
        {"min_leaf", std::to_string(params.min_leaf)},
        {"epsilon", std::to_string(params.epsilon)}};

    std::vector<bool> categorical(problem.space.size(), false);
    for (std::size_t d = 0; d < problem.space.size(); ++d)
        categorical[d] = std::holds_alternative<CategoricalKind>(problem.space[d].kind);
    std::vector<std::vector<double>> encoded;
    encoded.reserve(pool.size());
    for (const auto& s : pool) encoded.push_back(numeric_encoding(problem.space, s));

    // Evaluated and unevaluated index sets partition the pool throughout.
    std::vector<std::size_t> unevaluated(pool.size());
    for (std::size_t i = 0; i < unevaluated.size(); ++i) unevaluated[i] = i;
    rng.shuffle(unevaluated);
    std::vector<std::size_t> measured;
    measured.reserve(static_cast<std::size_t>(budget_evals));
    std::vector<ObjectiveVector> outcomes;
    outcomes.reserve(static_cast<std::size_t>(budget_evals));

    const auto measure = [&](std::size_t pos_in_unevaluated) {
        const std::size_t idx = unevaluated[pos_in_unevaluated];
        unevaluated.erase(unevaluated.begin() + static_cast<std::ptrdiff_t>(pos_in_unevaluated));
        const EvaluatedSolution es = eval.evaluate(pool[idx]);
        measured.push_back(idx);
        outcomes.push_back(es.objectives);
        result.archive.insert(es);
    };

    for (int i = 0; i < params.init_samples; ++i) measure(unevaluated.size() - 1);
    result.trace.push_back({eval.used(), result.archive.objectives()});

    const std::size_t m = problem.num_objectives;
    while (!eval.exhausted() && !unevaluated.empty()) {
        // One tree per objective, fitted on everything measured so far.
        std::vector<std::vector<double>> train;
        train.reserve(measured.size());
        for (std::size_t idx : measured) train.push_back(encoded[idx]);
        std::vector<RegressionTree> trees;
        trees.reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<double> targets;
            targets.reserve(measured.size());
            for (const auto& o : outcomes) targets.push_back(o[j]);
            trees.push_back(fit_tree(train, targets, categorical, params.min_leaf));
        }

        std::vector<ObjectiveVector> predicted;
        predicted.reserve(unevaluated.size());
        for (std::size_t idx : unevaluated) {
            std::vector<double> p(m);
            for (std::size_t j = 0; j < m; ++j) p[j] = trees[j].predict(encoded[idx]);
            predicted.push_back(ObjectiveVector::minimizing(std::move(p)));
        }

        std::size_t chosen = 0;
        if (params.acquisition == Acquisition::single_objective_min) {
            if (rng.uniform01() < params.epsilon) {
                chosen = rng.pick(unevaluated.size());  // explore
            } else {
                double best = predicted[0][0];
                std::vector<std::size_t> ties{0};
                for (std::size_t i = 1; i < predicted.size(); ++i) {
                    if (predicted[i][0] < best) {
                        best = predicted[i][0];
                        ties.assign(1, i);
                    } else if (predicted[i][0] == best) {
                        ties.push_back(i);
                    }
                }
                chosen = ties[rng.pick(ties.size())];
            }
        } else {
            // Candidate whose predicted vector dominates the most others.
            std::vector<int> counts(predicted.size(), 0);
            for (std::size_t i = 0; i < predicted.size(); ++i)
                for (std::size_t j = 0; j < predicted.size(); ++j)
                    if (i != j && dominates(predicted[i], predicted[j])) ++counts[i];
            int best = -1;
            std::vector<std::size_t> ties;
            for (std::size_t i = 0; i < counts.size(); ++i) {
                if (counts[i] > best) {
                    best = counts[i];
                    ties.assign(1, i);
                } else if (counts[i] == best) {
                    ties.push_back(i);
                }
            }
            chosen = ties[rng.pick(ties.size())];
        }
        measure(chosen);
        result.trace.push_back({eval.used(), result.archive.objectives()});
    }

    result.evals_used = eval.used();
    return result;
}

}  // namespace dsekit
