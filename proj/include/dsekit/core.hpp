#pragma once

// Decision/objective data model, dominance relations and evaluation
// budgeting shared by every optimizer in the toolkit.
//
// Objective values are stored in canonical minimize form: objectives
// declared as maximize are negated once at construction, so optimizers
// and indicators never carry per-objective direction plumbing. Reading
// a maximize objective back through original() un-negates it.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dsekit/rng.hpp"

namespace dsekit {

// Parse failure with a 1-based line number, shared by the text formats
// (feature models, plans, CSV readers). Derives from invalid_argument so
// callers handling bad input catch both with one handler.
class parse_error : public std::invalid_argument {
public:
    parse_error(const std::string& msg, int line = 0)
        : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// ---- decision space -------------------------------------------------------

struct ContinuousKind {
    double lo, hi;
};
struct IntegerKind {
    long long lo, hi;
};
struct BooleanKind {};
struct CategoricalKind {
    std::vector<std::string> levels;
};

using DecisionKind = std::variant<ContinuousKind, IntegerKind, BooleanKind, CategoricalKind>;

struct DecisionDescriptor {
    std::string name;
    DecisionKind kind;
};

class DecisionSpace {
public:
    explicit DecisionSpace(std::vector<DecisionDescriptor> decisions);

    std::size_t size() const { return decisions_.size(); }
    const DecisionDescriptor& operator[](std::size_t i) const { return decisions_[i]; }
    const std::vector<DecisionDescriptor>& decisions() const { return decisions_; }

    bool all_boolean() const;
    bool all_numeric() const;  // continuous or integer only

private:
    std::vector<DecisionDescriptor> decisions_;
};

// Categorical values are stored as a level index into the descriptor.
struct CatLevel {
    std::int32_t index = 0;
    friend bool operator==(CatLevel a, CatLevel b) { return a.index == b.index; }
};

using Value = std::variant<double, long long, bool, CatLevel>;

struct Solution {
    std::vector<Value> values;

    friend bool operator==(const Solution& a, const Solution& b) { return a.values == b.values; }
};

// Throws std::invalid_argument unless every value matches its descriptor
// kind and lies inside its domain.
void validate_solution(const DecisionSpace& space, const Solution& s);

Solution random_solution(const DecisionSpace& space, SeededRng& rng);

// Raw numeric encoding: continuous/integer as-is, boolean 0/1, categorical
// as level index. Used by the regression trees.
std::vector<double> numeric_encoding(const DecisionSpace& space, const Solution& s);

// ---- objectives ------------------------------------------------------------

enum class Direction { minimize, maximize };

class ObjectiveVector {
public:
    // Negates maximize entries; rejects NaN/Inf outright (silent clamping
    // would corrupt dominance).
    ObjectiveVector(std::vector<double> values, std::vector<Direction> directions);

    // All-minimize convenience, the common case.
    static ObjectiveVector minimizing(std::vector<double> values);

    std::size_t arity() const { return canonical_.size(); }
    // Canonical (minimize-form) value.
    double operator[](std::size_t i) const { return canonical_[i]; }
    std::span<const double> canonical() const { return canonical_; }
    // The value as originally stated (maximize entries un-negated).
    double original(std::size_t i) const;
    const std::vector<Direction>& directions() const { return directions_; }

    friend bool operator==(const ObjectiveVector& a, const ObjectiveVector& b) {
        return a.canonical_ == b.canonical_;
    }

private:
    std::vector<double> canonical_;
    std::vector<Direction> directions_;
};

struct EvaluatedSolution {
    Solution solution;
    ObjectiveVector objectives;
    int eval_index = 0;  // 1-based order of evaluation within a run
};

// ---- dominance -------------------------------------------------------------

// True iff u is no worse than v in every objective and strictly better in
// at least one. Exact float comparison; callers needing tolerance must
// pre-round.
bool dominates(const ObjectiveVector& u, const ObjectiveVector& v);

// Indices of members dominated by no other member, input order preserved.
std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points);

// Additive epsilon indicator: max_i(u_i - v_i) on canonical values.
// <= 0 iff u weakly dominates v. Expects normalized objectives.
double epsilon_indicator(const ObjectiveVector& u, const ObjectiveVector& v);

// Additive-epsilon indicator fitness of population[index] relative to its
// peers: sum over y != x of -exp(-eps(y, x) / kappa). Larger is better.
double indicator_fitness(std::span<const ObjectiveVector> population, std::size_t index,
                         double kappa = 0.05);
// All fitness values at once (the O(n^2) epsilon table is shared).
std::vector<double> indicator_fitnesses(std::span<const ObjectiveVector> population,
                                        double kappa = 0.05);

// ---- archive ---------------------------------------------------------------

// Mutually non-dominated set of evaluated solutions. insert() drops
// newcomers that are dominated or exactly duplicate an existing member's
// objectives, and evicts members the newcomer dominates.
class ParetoArchive {
public:
    bool insert(EvaluatedSolution member);
    const std::vector<EvaluatedSolution>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    std::vector<ObjectiveVector> objectives() const;

private:
    std::vector<EvaluatedSolution> members_;
};

// The members dominated by no other member, survivor order preserved.
// Duplicates survive (they are mutually non-dominated); empty input gives
// an empty archive.
ParetoArchive nondominated_filter(std::span<const EvaluatedSolution> set);

// ---- budget ----------------------------------------------------------------

class budget_exhausted : public std::runtime_error {
public:
    budget_exhausted() : std::runtime_error("evaluation budget exhausted") {}
};

class Budget {
public:
    explicit Budget(int max_evals);

    int max_evals() const { return max_evals_; }
    int used() const { return used_; }
    int remaining() const { return max_evals_ - used_; }
    bool exhausted() const { return used_ >= max_evals_; }
    void consume();  // throws budget_exhausted past the limit

private:
    int max_evals_;
    int used_ = 0;
};

// ---- normalization and distance ---------------------------------------------

struct ObjectiveBounds {
    std::vector<double> min, max;
};

ObjectiveBounds front_bounds(std::span<const ObjectiveVector> front);

// Min-max normalization per objective: (v - min) / (max - min). A
// degenerate objective (max == min) maps to 0 everywhere. Bounds default
// to the front's own min/max. Result is all-minimize.
std::vector<ObjectiveVector> normalize_front(std::span<const ObjectiveVector> front,
                                             const std::optional<ObjectiveBounds>& bounds = {});

// d(x,y) = (sum_i |x_i - y_i|^n)^(1/n); n = 2 is Euclidean. Requires n >= 1.
double minkowski_distance(std::span<const double> x, std::span<const double> y, double n);

double euclidean_distance(std::span<const double> x, std::span<const double> y);

}  // namespace dsekit
