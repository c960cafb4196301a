#include "dsekit/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dsekit {

// ---- decision space -------------------------------------------------------

DecisionSpace::DecisionSpace(std::vector<DecisionDescriptor> decisions)
    : decisions_(std::move(decisions)) {
    if (decisions_.empty()) throw std::invalid_argument("decision space needs at least one decision");
    std::set<std::string> names;
    for (const auto& d : decisions_) {
        if (!names.insert(d.name).second)
            throw std::invalid_argument("duplicate decision name: " + d.name);
        if (const auto* c = std::get_if<ContinuousKind>(&d.kind)) {
            if (!(c->lo < c->hi))
                throw std::invalid_argument("continuous decision " + d.name + " needs lo < hi");
        } else if (const auto* i = std::get_if<IntegerKind>(&d.kind)) {
            if (!(i->lo < i->hi))
                throw std::invalid_argument("integer decision " + d.name + " needs lo < hi");
        } else if (const auto* cat = std::get_if<CategoricalKind>(&d.kind)) {
            std::set<std::string> levels(cat->levels.begin(), cat->levels.end());
            if (cat->levels.size() < 2 || levels.size() != cat->levels.size())
                throw std::invalid_argument("categorical decision " + d.name +
                                            " needs >= 2 distinct levels");
        }
    }
}

bool DecisionSpace::all_boolean() const {
    return std::all_of(decisions_.begin(), decisions_.end(),
                       [](const auto& d) { return std::holds_alternative<BooleanKind>(d.kind); });
}

bool DecisionSpace::all_numeric() const {
    return std::all_of(decisions_.begin(), decisions_.end(), [](const auto& d) {
        return std::holds_alternative<ContinuousKind>(d.kind) ||
               std::holds_alternative<IntegerKind>(d.kind);
    });
}

void validate_solution(const DecisionSpace& space, const Solution& s) {
    if (s.values.size() != space.size())
        throw std::invalid_argument("solution arity " + std::to_string(s.values.size()) +
                                    " does not match space arity " + std::to_string(space.size()));
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& d = space[i];
        const auto& v = s.values[i];
        const bool ok = std::visit(
            [&](const auto& kind) -> bool {
                using K = std::decay_t<decltype(kind)>;
                if constexpr (std::is_same_v<K, ContinuousKind>) {
                    const auto* x = std::get_if<double>(&v);
                    return x && std::isfinite(*x) && *x >= kind.lo && *x <= kind.hi;
                } else if constexpr (std::is_same_v<K, IntegerKind>) {
                    const auto* x = std::get_if<long long>(&v);
                    return x && *x >= kind.lo && *x <= kind.hi;
                } else if constexpr (std::is_same_v<K, BooleanKind>) {
                    return std::holds_alternative<bool>(v);
                } else {
                    const auto* x = std::get_if<CatLevel>(&v);
                    return x && x->index >= 0 &&
                           static_cast<std::size_t>(x->index) < kind.levels.size();
                }
            },
            d.kind);
        if (!ok)
            throw std::invalid_argument("value for decision '" + d.name +
                                        "' is out of domain or of the wrong kind");
    }
}

Solution random_solution(const DecisionSpace& space, SeededRng& rng) {
    Solution s;
    s.values.reserve(space.size());
    for (const auto& d : space.decisions()) {
        s.values.push_back(std::visit(
            [&](const auto& kind) -> Value {
                using K = std::decay_t<decltype(kind)>;
                if constexpr (std::is_same_v<K, ContinuousKind>)
                    return rng.uniform(kind.lo, kind.hi);
                else if constexpr (std::is_same_v<K, IntegerKind>)
                    return rng.uniform_int(kind.lo, kind.hi);
                else if constexpr (std::is_same_v<K, BooleanKind>)
                    return rng.coin();
                else
                    return CatLevel{static_cast<std::int32_t>(rng.pick(kind.levels.size()))};
            },
            d.kind));
    }
    return s;
}

std::vector<double> numeric_encoding(const DecisionSpace& space, const Solution& s) {
    if (s.values.size() != space.size())
        throw std::invalid_argument("numeric_encoding: arity mismatch");
    std::vector<double> out;
    out.reserve(s.values.size());
    for (const auto& v : s.values) {
        out.push_back(std::visit(
            [](const auto& x) -> double {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, double>) return x;
                else if constexpr (std::is_same_v<T, long long>) return static_cast<double>(x);
                else if constexpr (std::is_same_v<T, bool>) return x ? 1.0 : 0.0;
                else return static_cast<double>(x.index);
            },
            v));
    }
    return out;
}

// ---- objectives -------------------------------------------------------------

ObjectiveVector::ObjectiveVector(std::vector<double> values, std::vector<Direction> directions)
    : canonical_(std::move(values)), directions_(std::move(directions)) {
    if (canonical_.empty()) throw std::invalid_argument("objective vector needs >= 1 objective");
    if (canonical_.size() != directions_.size())
        throw std::invalid_argument("objective values/directions arity mismatch");
    for (std::size_t i = 0; i < canonical_.size(); ++i) {
        if (!std::isfinite(canonical_[i]))
            throw std::invalid_argument("objective " + std::to_string(i + 1) +
                                        " is NaN or infinite");
        if (directions_[i] == Direction::maximize) canonical_[i] = -canonical_[i];
    }
}

ObjectiveVector ObjectiveVector::minimizing(std::vector<double> values) {
    std::vector<Direction> directions(values.size(), Direction::minimize);
    return ObjectiveVector(std::move(values), std::move(directions));
}

double ObjectiveVector::original(std::size_t i) const {
    return directions_[i] == Direction::maximize ? -canonical_[i] : canonical_[i];
}

// ---- dominance --------------------------------------------------------------

bool dominates(const ObjectiveVector& u, const ObjectiveVector& v) {
    if (u.arity() != v.arity())
        throw std::invalid_argument("dominates: incompatible objective spaces (arity " +
                                    std::to_string(u.arity()) + " vs " +
                                    std::to_string(v.arity()) + ")");
    bool strictly_better = false;
    for (std::size_t i = 0; i < u.arity(); ++i) {
        if (u[i] > v[i]) return false;
        if (u[i] < v[i]) strictly_better = true;
    }
    return strictly_better;
}

std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j)
            if (j != i && dominates(points[j], points[i])) dominated = true;
        if (!dominated) out.push_back(i);
    }
    return out;
}

double epsilon_indicator(const ObjectiveVector& u, const ObjectiveVector& v) {
    if (u.arity() != v.arity())
        throw std::invalid_argument("epsilon_indicator: arity mismatch");
    double eps = u[0] - v[0];
    for (std::size_t i = 1; i < u.arity(); ++i) eps = std::max(eps, u[i] - v[i]);
    return eps;
}

double indicator_fitness(std::span<const ObjectiveVector> population, std::size_t index,
                         double kappa) {
    if (population.size() < 2)
        throw std::invalid_argument("indicator_fitness: population needs >= 2 members");
    if (!(kappa > 0)) throw std::invalid_argument("indicator_fitness: kappa must be > 0");
    double fitness = 0.0;
    for (std::size_t j = 0; j < population.size(); ++j) {
        if (j == index) continue;
        fitness -= std::exp(-epsilon_indicator(population[j], population[index]) / kappa);
    }
    return fitness;
}

std::vector<double> indicator_fitnesses(std::span<const ObjectiveVector> population,
                                        double kappa) {
    if (population.size() < 2)
        throw std::invalid_argument("indicator_fitnesses: population needs >= 2 members");
    if (!(kappa > 0)) throw std::invalid_argument("indicator_fitnesses: kappa must be > 0");
    const std::size_t n = population.size();
    std::vector<double> fitness(n, 0.0);
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) {
            if (x == y) continue;
            fitness[x] -= std::exp(-epsilon_indicator(population[y], population[x]) / kappa);
        }
    return fitness;
}

// ---- archive ----------------------------------------------------------------

bool ParetoArchive::insert(EvaluatedSolution member) {
    for (const auto& m : members_) {
        if (m.objectives == member.objectives) return false;
        if (dominates(m.objectives, member.objectives)) return false;
    }
    std::erase_if(members_,
                  [&](const EvaluatedSolution& m) { return dominates(member.objectives, m.objectives); });
    members_.push_back(std::move(member));
    return true;
}

std::vector<ObjectiveVector> ParetoArchive::objectives() const {
    std::vector<ObjectiveVector> out;
    out.reserve(members_.size());
    for (const auto& m : members_) out.push_back(m.objectives);
    return out;
}

ParetoArchive nondominated_filter(std::span<const EvaluatedSolution> set) {
    ParetoArchive archive;
    if (set.empty()) return archive;
    std::vector<ObjectiveVector> points;
    points.reserve(set.size());
    for (const auto& m : set) points.push_back(m.objectives);
    for (std::size_t i : nondominated_indices(points)) archive.insert(set[i]);
    return archive;
}

// ---- budget -------------------------------------------------------------------

Budget::Budget(int max_evals) : max_evals_(max_evals) {
    if (max_evals <= 0) throw std::invalid_argument("budget must be > 0");
}

void Budget::consume() {
    if (used_ >= max_evals_) throw budget_exhausted();
    ++used_;
}

// ---- normalization and distance -------------------------------------------------

ObjectiveBounds front_bounds(std::span<const ObjectiveVector> front) {
    if (front.empty()) throw std::invalid_argument("front_bounds: empty front");
    const std::size_t m = front[0].arity();
    ObjectiveBounds b{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
    for (std::size_t i = 0; i < m; ++i) b.min[i] = b.max[i] = front[0][i];
    for (const auto& p : front) {
        if (p.arity() != m) throw std::invalid_argument("front_bounds: mixed arity");
        for (std::size_t i = 0; i < m; ++i) {
            b.min[i] = std::min(b.min[i], p[i]);
            b.max[i] = std::max(b.max[i], p[i]);
        }
    }
    return b;
}

std::vector<ObjectiveVector> normalize_front(std::span<const ObjectiveVector> front,
                                             const std::optional<ObjectiveBounds>& bounds) {
    if (front.empty()) throw std::invalid_argument("normalize_front: empty front");
    const ObjectiveBounds b = bounds ? *bounds : front_bounds(front);
    const std::size_t m = front[0].arity();
    if (b.min.size() != m || b.max.size() != m)
        throw std::invalid_argument("normalize_front: bounds arity mismatch");
    std::vector<ObjectiveVector> out;
    out.reserve(front.size());
    for (const auto& p : front) {
        std::vector<double> vals(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double range = b.max[i] - b.min[i];
            vals[i] = range > 0 ? (p[i] - b.min[i]) / range : 0.0;
        }
        out.push_back(ObjectiveVector::minimizing(std::move(vals)));
    }
    return out;
}

double minkowski_distance(std::span<const double> x, std::span<const double> y, double n) {
    if (x.size() != y.size()) throw std::invalid_argument("minkowski_distance: arity mismatch");
    if (!(n >= 1.0)) throw std::invalid_argument("minkowski_distance: order must be >= 1");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i] - y[i]), n);
    return std::pow(sum, 1.0 / n);
}

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("euclidean_distance: arity mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace dsekit
