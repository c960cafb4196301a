#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dsekit/flash.hpp"

using namespace dsekit;

namespace {

// Independent straightforward tree walk over the public node array.
double oracle_walk(const RegressionTree& tree, const std::vector<double>& row) {
    int at = 0;
    const auto& nodes = tree.nodes();
    while (nodes[static_cast<std::size_t>(at)].decision >= 0) {
        const auto& n = nodes[static_cast<std::size_t>(at)];
        const double v = row[static_cast<std::size_t>(n.decision)];
        bool left;
        if (n.category >= 0) left = static_cast<std::int32_t>(v) == n.category;
        else left = v <= n.threshold;
        at = left ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(at)].mean;
}

double training_mse(const RegressionTree& tree, const std::vector<std::vector<double>>& rows,
                    const std::vector<double>& targets) {
    double mse = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double e = tree.predict(rows[i]) - targets[i];
        mse += e * e;
    }
    return mse / static_cast<double>(rows.size());
}

}  // namespace

TEST_CASE("constant targets give a single-leaf tree") {
    const std::vector<std::vector<double>> rows{{0}, {1}, {2}, {3}};
    const std::vector<double> targets{7.5, 7.5, 7.5, 7.5};
    const RegressionTree tree = fit_tree(rows, targets, {false}, 1);
    CHECK(tree.nodes().size() == 1);
    CHECK(tree.predict(std::vector<double>{99.0}) == 7.5);
}

TEST_CASE("min_leaf 1 on distinct rows reproduces every target") {
    SeededRng rng(71);
    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    for (int i = 0; i < 64; ++i) {
        rows.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
        targets.push_back(rng.uniform(-5, 5));
    }
    const RegressionTree tree = fit_tree(rows, targets, {false, false, false}, 1);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(tree.predict(rows[i]) == targets[i]);
}

TEST_CASE("a step function splits first at the step boundary") {
    // Target jumps at x = 0.5; brute-force over all candidate thresholds
    // says any cut strictly between 0.4 and 0.6 is optimal.
    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    for (int i = 0; i < 10; ++i) {
        const double x = static_cast<double>(i) / 9.0;
        rows.push_back({x});
        targets.push_back(x < 0.5 ? 0.0 : 1.0);
    }
    const RegressionTree tree = fit_tree(rows, targets, {false}, 1);
    const auto& root = tree.nodes()[0];
    REQUIRE(root.decision == 0);
    // Values straddling the step: 4/9 and 5/9.
    CHECK(root.threshold > 4.0 / 9.0);
    CHECK(root.threshold < 5.0 / 9.0);

    // Brute-force enumeration of every midpoint confirms no better split.
    const auto weighted_sse = [&](double cut) {
        double sum_l = 0, sum_r = 0;
        int n_l = 0, n_r = 0;
        for (std::size_t i = 0; i < rows.size(); ++i)
            (rows[i][0] <= cut ? (sum_l += targets[i], ++n_l) : (sum_r += targets[i], ++n_r));
        double sse = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double mean = rows[i][0] <= cut ? sum_l / n_l : sum_r / n_r;
            sse += (targets[i] - mean) * (targets[i] - mean);
        }
        return sse;
    };
    double best = 1e300;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        best = std::min(best, weighted_sse(0.5 * (rows[i][0] + rows[i + 1][0])));
    CHECK(weighted_sse(root.threshold) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("every leaf keeps at least min_leaf rows") {
    SeededRng rng(73);
    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    for (int i = 0; i < 100; ++i) {
        rows.push_back({rng.uniform01(), rng.uniform01()});
        targets.push_back(rng.uniform01());
    }
    for (const int min_leaf : {1, 4, 10}) {
        const RegressionTree tree = fit_tree(rows, targets, {false, false}, min_leaf);
        for (const auto& node : tree.nodes())
            if (node.decision < 0) CHECK(node.count >= min_leaf);
    }
}

TEST_CASE("training error shrinks as leaves shrink") {
    SeededRng rng(79);
    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    for (int i = 0; i < 120; ++i) {
        rows.push_back({rng.uniform01(), rng.uniform01()});
        targets.push_back(std::sin(6.0 * rows.back()[0]) + 0.2 * rng.uniform01());
    }
    const double coarse = training_mse(fit_tree(rows, targets, {false, false}, 30), rows, targets);
    const double medium = training_mse(fit_tree(rows, targets, {false, false}, 8), rows, targets);
    const double fine = training_mse(fit_tree(rows, targets, {false, false}, 1), rows, targets);
    CHECK(medium <= coarse + 1e-12);
    CHECK(fine <= medium + 1e-12);
    CHECK(fine == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("categorical singleton-vs-rest splits") {
    // Column 0 is a 3-level categorical; level 2 has a very different target.
    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    for (int rep = 0; rep < 4; ++rep)
        for (int lvl = 0; lvl < 3; ++lvl) {
            rows.push_back({static_cast<double>(lvl)});
            targets.push_back(lvl == 2 ? 10.0 : 1.0);
        }
    const RegressionTree tree = fit_tree(rows, targets, {true}, 2);
    const auto& root = tree.nodes()[0];
    CHECK(root.decision == 0);
    CHECK(root.category == 2);
    CHECK(tree.predict(std::vector<double>{2.0}) == doctest::Approx(10.0));
    CHECK(tree.predict(std::vector<double>{0.0}) == doctest::Approx(1.0));
}

TEST_CASE("predict matches an independent walk and validates arity") {
    SeededRng rng(83);
    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    for (int i = 0; i < 80; ++i) {
        rows.push_back({rng.uniform01(), rng.uniform(0, 4), rng.uniform(-2, 2)});
        targets.push_back(rows.back()[0] * 3 - rows.back()[2]);
    }
    const RegressionTree tree = fit_tree(rows, targets, {false, false, false}, 3);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> probe{rng.uniform01(), rng.uniform(0, 4), rng.uniform(-2, 2)};
        CHECK(tree.predict(probe) == oracle_walk(tree, probe));
    }
    CHECK_THROWS_AS(tree.predict(std::vector<double>{0.5}), std::invalid_argument);
    CHECK_THROWS_AS(fit_tree({}, {}, {}, 1), std::invalid_argument);
}

namespace {

std::shared_ptr<const TabularSpace> step_pool(std::size_t rows, std::uint64_t seed) {
    // Tree-learnable structure: one decision column fully determines the
    // objective through a step function, the rest is noise.
    SeededRng rng(seed);
    std::string csv = "d1,d2,d3,o1\n";
    for (std::size_t i = 0; i < rows; ++i) {
        const double x = rng.uniform01();
        const double noise1 = rng.uniform01();
        const double noise2 = rng.uniform01();
        double y = x < 0.25 ? 1.0 : (x < 0.5 ? 3.0 : (x < 0.75 ? 2.0 : 4.0));
        y += x * 0.01;  // strictly increasing within plateaus: unique optimum
        csv += std::to_string(x) + "," + std::to_string(noise1) + "," + std::to_string(noise2) +
               "," + std::to_string(y) + "\n";
    }
    return std::make_shared<const TabularSpace>(tabular_from_csv(csv, 1));
}

}  // namespace

TEST_CASE("flash with budget = pool size recovers the exhaustive pareto set") {
    SeededRng gen(89);
    std::string csv = "d1,o1,o2\n";
    for (int i = 0; i < 30; ++i)
        csv += std::to_string(i) + "," + std::to_string(gen.uniform01()) + "," +
               std::to_string(gen.uniform01()) + "\n";
    auto space = std::make_shared<const TabularSpace>(tabular_from_csv(csv, 2));
    const Problem p = tabular_problem(space, "pool30");
    const auto expected = nondominated_indices(space->measured());

    for (const auto acquisition : {Acquisition::dominance_count, Acquisition::single_objective_min}) {
        FlashParams params;
        params.init_samples = 5;
        params.acquisition = acquisition;
        const RunResult run = flash(p, params, 30, 3);
        CHECK(run.evals_used == 30);
        CHECK(run.archive.size() == expected.size());
    }
}

TEST_CASE("flash homes in on a tree-learnable optimum") {
    auto space = step_pool(200, 91);
    const Problem p = tabular_problem(space, "step200");
    // Exhaustive-scan oracle: the best row.
    std::size_t best_row = 0;
    for (std::size_t i = 1; i < space->num_rows(); ++i)
        if (space->measured()[i][0] < space->measured()[best_row][0]) best_row = i;

    // Rank of the returned best within the measured objectives.
    std::vector<double> all;
    for (const auto& o : space->measured()) all.push_back(o[0]);
    std::sort(all.begin(), all.end());

    int top_tier = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        FlashParams params;
        params.init_samples = 10;
        params.acquisition = Acquisition::single_objective_min;
        const RunResult run = flash(p, params, 40, seed);
        double found = 1e300;
        for (const auto& member : run.archive.members())
            found = std::min(found, member.objectives[0]);
        const auto rank = static_cast<std::size_t>(
            std::lower_bound(all.begin(), all.end(), found) - all.begin());
        if (rank < all.size() / 20) ++top_tier;  // top 5%
    }
    CHECK(top_tier >= 24);
}

TEST_CASE("flash spends exactly one evaluation per iteration") {
    auto space = step_pool(60, 97);
    const Problem p = tabular_problem(space, "step60");
    FlashParams params;
    params.init_samples = 8;
    const RunResult run = flash(p, params, 20, 7);
    CHECK(run.evals_used == 20);
    REQUIRE(run.trace.size() == 13);  // init snapshot + 12 acquisitions
    for (std::size_t i = 1; i < run.trace.size(); ++i)
        CHECK(run.trace[i].eval_index == run.trace[i - 1].eval_index + 1);
}

TEST_CASE("flash contracts") {
    auto space = step_pool(40, 101);
    const Problem p = tabular_problem(space, "step40");
    FlashParams params;
    params.init_samples = 50;
    CHECK_THROWS_AS(flash(p, params, 60, 1), std::invalid_argument);  // pool < init
    params.init_samples = 10;
    CHECK_THROWS_AS(flash(p, params, 41, 1), std::invalid_argument);  // budget > pool
    CHECK_THROWS_AS(flash(p, params, 10, 1), std::invalid_argument);  // budget <= init
    CHECK_THROWS_AS(flash(zdt(1, 4), params, 30, 1), std::invalid_argument);  // no pool

    const RunResult a = flash(p, params, 30, 11);
    const RunResult b = flash(p, params, 30, 11);
    REQUIRE(a.archive.size() == b.archive.size());
    for (std::size_t i = 0; i < a.archive.size(); ++i)
        CHECK(a.archive.members()[i].objectives == b.archive.members()[i].objectives);
}
