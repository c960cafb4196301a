#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dsekit/indicators.hpp"
#include "dsekit/optimizers.hpp"

using namespace dsekit;

namespace {

bool same_archive(const RunResult& a, const RunResult& b) {
    if (a.archive.size() != b.archive.size()) return false;
    for (std::size_t i = 0; i < a.archive.size(); ++i) {
        if (!(a.archive.members()[i].objectives == b.archive.members()[i].objectives))
            return false;
        if (!(a.archive.members()[i].solution == b.archive.members()[i].solution)) return false;
        if (a.archive.members()[i].eval_index != b.archive.members()[i].eval_index) return false;
    }
    return a.evals_used == b.evals_used;
}

void check_mutual_nondomination(const ParetoArchive& archive) {
    for (std::size_t i = 0; i < archive.size(); ++i)
        for (std::size_t j = 0; j < archive.size(); ++j)
            if (i != j)
                CHECK_FALSE(
                    dominates(archive.members()[i].objectives, archive.members()[j].objectives));
}

// 1-D convex quadratic over [0,1] with its minimum value 0 at x = 0.3.
Problem quadratic_1d() {
    Problem p{
        "quadratic",
        DecisionSpace({{"x", ContinuousKind{0.0, 1.0}}}),
        1,
        {Direction::minimize},
        {},
        nullptr,
        {},
    };
    p.raw_evaluate = [](const Solution& s) {
        const double x = std::get<double>(s.values[0]);
        return std::vector<double>{(x - 0.3) * (x - 0.3)};
    };
    return p;
}

std::shared_ptr<const TabularSpace> random_tabular(std::size_t rows, std::uint64_t seed) {
    SeededRng rng(seed);
    std::string csv = "d1,d2,o1,o2\n";
    for (std::size_t i = 0; i < rows; ++i)
        csv += std::to_string(i) + "," + std::to_string(rng.pick(1000)) + "," +
               std::to_string(rng.uniform01()) + "," + std::to_string(rng.uniform01()) + "\n";
    return std::make_shared<const TabularSpace>(tabular_from_csv(csv, 2));
}

}  // namespace

TEST_CASE("random search basics") {
    const Problem p = zdt(1, 4);
    const RunResult one = random_search(p, 1, 5);
    CHECK(one.evals_used == 1);
    CHECK(one.archive.size() == 1);

    const RunResult a = random_search(p, 200, 99);
    const RunResult b = random_search(p, 200, 99);
    CHECK(same_archive(a, b));
    CHECK(a.evals_used == 200);
    check_mutual_nondomination(a.archive);

    const RunResult c = random_search(p, 200, 100);
    CHECK_FALSE(same_archive(a, c));  // different seed, different run
}

TEST_CASE("random search without replacement scans a pool exhaustively") {
    auto space = random_tabular(100, 7);
    const Problem p = tabular_problem(space, "pool100");
    RandomSearchParams params;
    params.without_replacement = true;
    const RunResult run = random_search(p, 100, 11, params);
    CHECK(run.evals_used == 100);

    // Exhaustive-scan oracle.
    const auto expected = nondominated_indices(space->measured());
    CHECK(run.archive.size() == expected.size());
    for (std::size_t idx : expected) {
        const auto& target = space->measured()[idx];
        const bool found = std::any_of(
            run.archive.members().begin(), run.archive.members().end(),
            [&](const EvaluatedSolution& m) { return m.objectives == target; });
        CHECK(found);
    }
}

TEST_CASE("simulated annealing converges on a 1-D quadratic") {
    const Problem p = quadratic_1d();
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const RunResult run = simulated_annealing(p, 2000, SaParams{}, seed);
        REQUIRE(run.archive.size() == 1);
        CHECK(run.evals_used == 2000);
        if (run.archive.members()[0].objectives[0] < 1e-2) ++hits;
    }
    CHECK(hits >= 28);
}

TEST_CASE("simulated annealing contracts") {
    const Problem p = zdt(1, 3);
    CHECK_THROWS_AS(simulated_annealing(p, 50, SaParams{}, 1, 7), std::invalid_argument);
    CHECK_THROWS_AS(simulated_annealing(p, 50, SaParams{0.0, 0.99, 0.1}, 1),
                    std::invalid_argument);
    const RunResult a = simulated_annealing(p, 300, SaParams{}, 21, 1);
    const RunResult b = simulated_annealing(p, 300, SaParams{}, 21, 1);
    CHECK(same_archive(a, b));
    // Trace keeps strictly improving best-so-far values.
    for (std::size_t i = 1; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].eval_index > a.trace[i - 1].eval_index);
        CHECK(a.trace[i].front[0][1] <= a.trace[i - 1].front[0][1]);
    }
}

TEST_CASE("differential evolution solves the sphere") {
    const Problem p = sphere(5);
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const RunResult run = differential_evolution(p, 5000, DeParams{}, seed);
        REQUIRE(run.archive.size() == 1);
        CHECK(run.evals_used == 5000);
        if (run.archive.members()[0].objectives[0] < 1e-3) ++hits;
        // All decisions stay inside the box (mutants are clamped).
        for (const auto& v : run.archive.members()[0].solution.values) {
            const double x = std::get<double>(v);
            CHECK(x >= -5.12);
            CHECK(x <= 5.12);
        }
    }
    CHECK(hits >= 28);
}

TEST_CASE("differential evolution contracts") {
    const Problem p = sphere(3);
    DeParams bad;
    bad.np = 3;
    CHECK_THROWS_AS(differential_evolution(p, 100, bad, 1), std::invalid_argument);
    DeParams dont_fit;
    dont_fit.np = 200;
    CHECK_THROWS_AS(differential_evolution(p, 100, dont_fit, 1), std::invalid_argument);

    // Boolean spaces are rejected.
    Problem boolean{
        "bits",
        DecisionSpace({{"a", BooleanKind{}}, {"b", BooleanKind{}}}),
        1,
        {Direction::minimize},
        {},
        nullptr,
        {},
    };
    boolean.raw_evaluate = [](const Solution& s) {
        return std::vector<double>{std::get<bool>(s.values[0]) ? 1.0 : 0.0};
    };
    CHECK_THROWS_AS(differential_evolution(boolean, 100, DeParams{}, 1), std::invalid_argument);

    const RunResult a = differential_evolution(p, 400, DeParams{}, 3);
    const RunResult b = differential_evolution(p, 400, DeParams{}, 3);
    CHECK(same_archive(a, b));
}

TEST_CASE("DE with f=0, cr=0 only copies existing values through the forced slot") {
    // Operator algebra: the mutant collapses to peer a, so no coordinate
    // value outside the initial population can ever appear, and an
    // effectively identical population is stationary.
    auto seen = std::make_shared<std::vector<std::vector<double>>>();
    Problem spy{
        "spy",
        DecisionSpace({{"x", ContinuousKind{0, 1}},
                       {"y", ContinuousKind{0, 1}},
                       {"z", ContinuousKind{0, 1}}}),
        1,
        {Direction::minimize},
        {},
        nullptr,
        {},
    };
    spy.raw_evaluate = [seen](const Solution& s) {
        std::vector<double> coords;
        for (const auto& v : s.values) coords.push_back(std::get<double>(v));
        seen->push_back(coords);
        double sum = 0;
        for (double c : coords) sum += c;
        return std::vector<double>{sum};
    };
    DeParams params;
    params.np = 6;
    params.f = 0.0;
    params.cr = 0.0;
    const RunResult run = differential_evolution(spy, 60, params, 19);
    CHECK(run.evals_used == 60);
    REQUIRE(seen->size() == 60);
    for (std::size_t i = 6; i < seen->size(); ++i)
        for (std::size_t d = 0; d < 3; ++d) {
            bool known = false;
            for (std::size_t j = 0; j < 6 && !known; ++j) known = (*seen)[j][d] == (*seen)[i][d];
            CHECK(known);
        }
}

TEST_CASE("integer decisions round and clamp through DE") {
    Problem grid{
        "grid",
        DecisionSpace({{"i", IntegerKind{-10, 10}}, {"j", IntegerKind{-10, 10}}}),
        1,
        {Direction::minimize},
        {},
        nullptr,
        {},
    };
    grid.raw_evaluate = [](const Solution& s) {
        const double a = static_cast<double>(std::get<long long>(s.values[0]));
        const double b = static_cast<double>(std::get<long long>(s.values[1]));
        return std::vector<double>{a * a + b * b};
    };
    const RunResult run = differential_evolution(grid, 600, DeParams{}, 17);
    CHECK(run.archive.members()[0].objectives[0] <= 2.0);
}

TEST_CASE("ga clone-only variation preserves the initial non-dominated set") {
    const Problem p = zdt(1, 6);
    GaParams params;
    params.pop_size = 16;
    params.crossover_prob = 0.0;
    params.mutation_prob = 0.0;
    const RunResult run = ga_multiobjective(p, 160, params, 23);

    // Re-create the initial population the run saw: first 16 evaluations.
    const RunResult fresh = ga_multiobjective(p, 16, params, 23);
    CHECK(run.archive.size() == fresh.archive.size());
    for (std::size_t i = 0; i < run.archive.size(); ++i)
        CHECK(run.archive.members()[i].objectives == fresh.archive.members()[i].objectives);
}

TEST_CASE("ga respects the budget and stays non-dominated") {
    const Problem p = zdt(1, 8);
    for (const auto selection : {SelectionKind::binary_dom, SelectionKind::indicator_dom}) {
        GaParams params;
        params.pop_size = 20;
        params.selection = selection;
        const RunResult run = ga_multiobjective(p, 333, params, 31);
        CHECK(run.evals_used <= 333);
        check_mutual_nondomination(run.archive);
        const RunResult again = ga_multiobjective(p, 333, params, 31);
        CHECK(same_archive(run, again));
    }
    GaParams odd;
    odd.pop_size = 7;
    CHECK_THROWS_AS(ga_multiobjective(p, 100, odd, 1), std::invalid_argument);
    CHECK_THROWS_AS(ga_multiobjective(sphere(3), 100, GaParams{}, 1), std::invalid_argument);
    GaParams too_big;
    too_big.pop_size = 200;
    CHECK_THROWS_AS(ga_multiobjective(p, 100, too_big, 1), std::invalid_argument);
}

TEST_CASE("ga archive hypervolume never decreases across trace snapshots") {
    const Problem p = zdt(1, 10);
    GaParams params;
    params.pop_size = 24;
    const RunResult run = ga_multiobjective(p, 1200, params, 37);
    REQUIRE(run.trace.size() > 2);
    const ReferencePoint ref{{12.0, 12.0}};  // generous box for raw zdt1 values
    SeededRng rng(1);
    double previous = -1.0;
    for (const auto& point : run.trace) {
        std::vector<ObjectiveVector> inside;
        for (const auto& o : point.front) {
            if (o[0] <= ref.values[0] && o[1] <= ref.values[1]) inside.push_back(o);
        }
        REQUIRE(!inside.empty());
        const double hv = hypervolume_exact(Front(inside), ref).value;
        CHECK(hv >= previous - 1e-12);
        previous = hv;
    }
}

TEST_CASE("ga on a mixed space exercises every variation operator") {
    Problem mixed{
        "mixed",
        DecisionSpace({{"x", ContinuousKind{0, 1}},
                       {"k", IntegerKind{0, 9}},
                       {"b", BooleanKind{}},
                       {"c", CategoricalKind{{"p", "q", "r"}}}}),
        2,
        {Direction::minimize, Direction::minimize},
        {},
        nullptr,
        {},
    };
    mixed.raw_evaluate = [](const Solution& s) {
        const double x = std::get<double>(s.values[0]);
        const double k = static_cast<double>(std::get<long long>(s.values[1]));
        const double b = std::get<bool>(s.values[2]) ? 1.0 : 0.0;
        const double c = static_cast<double>(std::get<CatLevel>(s.values[3]).index);
        return std::vector<double>{x + k / 9.0 + b, (1.0 - x) + c / 2.0};
    };
    GaParams params;
    params.pop_size = 12;
    const RunResult run = ga_multiobjective(mixed, 240, params, 41);
    CHECK(run.evals_used == 240);
    check_mutual_nondomination(run.archive);
    for (const auto& member : run.archive.members())
        CHECK_NOTHROW(validate_solution(mixed.space, member.solution));
}
