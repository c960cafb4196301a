#pragma once

// Quality measures comparing a predicted front P against an actual or
// reference front A. All functions are pure; Monte Carlo hypervolume takes
// an explicit SeededRng.

#include <optional>

#include "dsekit/core.hpp"

namespace dsekit {

class Front {
public:
    Front(std::vector<ObjectiveVector> points, bool normalized = false);

    const std::vector<ObjectiveVector>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    std::size_t arity() const { return points_[0].arity(); }
    bool normalized() const { return normalized_; }

private:
    std::vector<ObjectiveVector> points_;
    bool normalized_;
};

struct ReferencePoint {
    std::vector<double> values;
};

// Convenience: the conventional post-normalization reference (1.1, ..., 1.1).
ReferencePoint default_reference_point(std::size_t arity, double margin = 1.1);

// Mean Euclidean distance from each p in P to its nearest a in A.
// 0 iff P is geometrically contained in A.
double generational_distance(const Front& predicted, const Front& actual);

// Mean Euclidean distance from each a in A to its nearest p in P.
// igd(A, P) == gd with the arguments swapped.
double inverted_generational_distance(const Front& actual, const Front& predicted);

struct SpreadResult {
    double value = 0.0;
    bool degenerate = false;  // all points coincide; 0/0 guard fired
};

// Deb's spacing measure: for two objectives, consecutive Euclidean gaps
// along the front sorted by the first objective; for m > 2,
// nearest-neighbor gaps. Boundary terms are measured against P's own
// extremes, so a perfectly uniform front scores 0. Lower is better.
// Meaningful on normalized fronts (documented contract, not enforced).
SpreadResult spread(const Front& predicted);

struct HypervolumeResult {
    double value = 0.0;
    bool exact = true;
};

// Lebesgue measure of the space dominated by P up to ref, minimization
// form. Exact sweep for m == 2, recursive slicing for m == 3. Every point
// must weakly dominate ref.
HypervolumeResult hypervolume_exact(const Front& predicted, const ReferencePoint& ref);

// Monte Carlo estimate for any m (the only option for m >= 4).
HypervolumeResult hypervolume_monte_carlo(const Front& predicted, const ReferencePoint& ref,
                                          std::size_t samples, SeededRng& rng);

// Exact when m <= 3, Monte Carlo otherwise.
HypervolumeResult hypervolume(const Front& predicted, const ReferencePoint& ref,
                              std::size_t samples, SeededRng& rng);

// alpha = max_{a in A} min_{p in P} max_i (p_i - a_i); the smallest uniform
// shift making P weakly dominate A. Each (a, p) pair costs O(m).
double additive_approximation(const Front& actual, const Front& predicted);

// Non-dominated subset of the union of all outcomes, exact duplicates
// removed. The conventional stand-in for the unknowable actual front.
Front build_reference_front(std::span<const Front> outcomes);
Front build_reference_front(std::span<const std::vector<ObjectiveVector>> outcomes);

}  // namespace dsekit
