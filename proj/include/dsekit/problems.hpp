#pragma once

// Benchmark problems: synthetic fronts for debugging (ZDT, DTLZ2, sphere),
// tabular configuration spaces measured offline, and confusion-matrix goal
// functions. SPL feature models live in feature_model.hpp.

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "dsekit/core.hpp"

namespace dsekit {

// A problem is a decision space plus a deterministic evaluation function.
// evaluate() builds the canonical-minimize ObjectiveVector and rejects
// NaN/Inf. Optimizers must route calls through an Evaluator so they are
// counted against the run's Budget.
struct Problem {
    std::string name;
    DecisionSpace space;
    std::size_t num_objectives = 0;
    std::vector<Direction> directions;
    std::function<std::vector<double>(const Solution&)> raw_evaluate;

    // Finite candidate pool for pool-based optimizers (tabular spaces).
    std::shared_ptr<const std::vector<Solution>> pool;

    // Analytic/true front sampler where one is known (used as the IGD
    // reference by the tuner and by tests).
    std::function<std::vector<ObjectiveVector>(std::size_t)> true_front;

    ObjectiveVector evaluate(const Solution& s) const;
};

// Counts evaluations against a budget and stamps 1-based eval indices.
class Evaluator {
public:
    Evaluator(const Problem& problem, Budget& budget) : problem_(problem), budget_(budget) {}

    EvaluatedSolution evaluate(const Solution& s) {
        budget_.consume();
        return EvaluatedSolution{s, problem_.evaluate(s), budget_.used()};
    }

    const Problem& problem() const { return problem_; }
    Budget& budget() { return budget_; }
    int used() const { return budget_.used(); }
    bool exhausted() const { return budget_.exhausted(); }

private:
    const Problem& problem_;
    Budget& budget_;
};

// ---- synthetic benchmark problems ------------------------------------------

// ZDT1 or ZDT3 over [0,1]^n, two minimized objectives. Requires n >= 2.
Problem zdt(int variant, std::size_t n);

// Standard DTLZ2 with g = sum_{i=m..n} (x_i - 0.5)^2; on the true front
// sum_j f_j^2 == 1. Requires n >= m >= 2.
Problem dtlz2(std::size_t n, std::size_t m);

// Single-objective sphere sum(x_i^2) over [-5.12, 5.12]^n.
Problem sphere(std::size_t n);

// ---- tabular configuration spaces --------------------------------------------

// A pre-measured configuration space: rows of (decisions, objectives)
// loaded from CSV, looked up by exact match on the decision values.
class TabularSpace {
public:
    TabularSpace(DecisionSpace space, std::vector<Solution> rows,
                 std::vector<ObjectiveVector> measured);

    const DecisionSpace& space() const { return space_; }
    std::size_t num_rows() const { return rows_.size(); }
    std::size_t num_objectives() const { return measured_[0].arity(); }
    const std::vector<Solution>& rows() const { return rows_; }
    const std::vector<ObjectiveVector>& measured() const { return measured_; }

    // Exact-match lookup; throws std::invalid_argument("not in measured space")
    // for unknown decision tuples.
    const ObjectiveVector& lookup(const Solution& s) const;

private:
    static std::string key_of(const Solution& s);

    DecisionSpace space_;
    std::vector<Solution> rows_;
    std::vector<ObjectiveVector> measured_;
    std::map<std::string, std::size_t> index_;
};

// CSV header `d1,...,dk,o1,...,om`; decisions numeric or quoted categorical
// strings. Errors on duplicate decision rows, ragged rows, and non-numeric
// objective cells.
TabularSpace load_tabular(const std::string& path, std::size_t num_objectives);
TabularSpace tabular_from_csv(const std::string& text, std::size_t num_objectives);

// Wraps the space as an exact-lookup Problem exposing the full candidate
// pool. Enumerating the pool costs no budget; only evaluate calls do.
Problem tabular_problem(std::shared_ptr<const TabularSpace> space, std::string name);

// ---- confusion-matrix goals ----------------------------------------------------

// A/B/C/D are true negatives, false negatives, false positives, true
// positives; L_* the lines of code in each cell.
struct ConfusionCounts {
    long long a = 0, b = 0, c = 0, d = 0;
    double l_a = 0, l_b = 0, l_c = 0, l_d = 0;
};

// Metrics with zero denominators are absent from the map (an explicit
// undefined marker, never NaN).
using GoalMetrics = std::map<std::string, std::optional<double>>;
GoalMetrics goal_metrics(const ConfusionCounts& c);

// Fixed emission order: pd, pf, prec, acc, support, effort, reward.
const std::vector<std::string>& goal_metric_names();

}  // namespace dsekit
