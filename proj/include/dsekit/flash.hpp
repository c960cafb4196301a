#pragma once

// FLASH sequential model-based optimization over a finite candidate pool:
// evaluate a few candidates, fit one regression tree per objective, let an
// acquisition function pick what to measure next. The trees replace the
// Gaussian-process surrogate of classic active learning, so the method
// scales past a dozen decisions.

#include "dsekit/optimizers.hpp"

namespace dsekit {

// Variance-reduction CART for regression. Numeric splits test
// value <= threshold with thresholds at midpoints between consecutive
// distinct values; categorical splits are singleton-vs-rest on one level.
class RegressionTree {
public:
    struct Node {
        int decision = -1;          // -1 on leaves
        double threshold = 0.0;     // numeric split: left iff value <= threshold
        std::int32_t category = -1; // categorical split: left iff value == category
        int left = -1, right = -1;
        double mean = 0.0;          // prediction stored on every node
        int count = 0;              // training rows that reached this node
    };

    const std::vector<Node>& nodes() const { return nodes_; }
    int min_leaf() const { return min_leaf_; }
    double predict(std::span<const double> row) const;

    friend RegressionTree fit_tree(std::span<const std::vector<double>> rows,
                                   std::span<const double> targets,
                                   const std::vector<bool>& categorical, int min_leaf);

private:
    std::vector<Node> nodes_;
    std::vector<bool> categorical_;
    int min_leaf_ = 1;
};

// Greedy recursive splitting minimizing weighted child variance. Every leaf
// keeps >= min_leaf rows; splitting stops when no candidate reduces
// variance. `categorical` flags which encoded columns hold level indices.
RegressionTree fit_tree(std::span<const std::vector<double>> rows, std::span<const double> targets,
                        const std::vector<bool>& categorical, int min_leaf);

enum class Acquisition { dominance_count, single_objective_min };

struct FlashParams {
    int init_samples = 20;
    Acquisition acquisition = Acquisition::dominance_count;
    int min_leaf = 4;
    double epsilon = 0.05;  // single_objective_min: chance of a uniform random pick
};

// Requires a problem with a finite candidate pool. Evaluates init_samples
// distinct candidates, then repeatedly fits one tree per objective on
// everything measured so far, predicts the unevaluated rest, and evaluates
// the acquisition's pick until the budget is spent.
RunResult flash(const Problem& problem, const FlashParams& params, int budget,
                std::uint64_t seed);

}  // namespace dsekit
