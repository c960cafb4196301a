#include "dsekit/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dsekit {

namespace {

void check_comparable(const Front& a, const Front& b, const char* op) {
    if (a.arity() != b.arity())
        throw std::invalid_argument(std::string(op) + ": front arity mismatch");
    if (a.normalized() != b.normalized())
        throw std::invalid_argument(std::string(op) + ": mixed normalization status");
}

double nearest_distance(const ObjectiveVector& p, const Front& to) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : to.points())
        best = std::min(best, euclidean_distance(p.canonical(), q.canonical()));
    return best;
}

// 2-D sweep over points sorted by the first objective; dominated points
// contribute nothing and are skipped via the running minimum on f2.
double hv2(std::vector<std::pair<double, double>> pts, double rx, double ry) {
    std::sort(pts.begin(), pts.end());
    double volume = 0.0;
    double prev_y = ry;
    for (const auto& [x, y] : pts) {
        if (y < prev_y) {
            volume += (rx - x) * (prev_y - y);
            prev_y = y;
        }
    }
    return volume;
}

}  // namespace

Front::Front(std::vector<ObjectiveVector> points, bool normalized)
    : points_(std::move(points)), normalized_(normalized) {
    if (points_.empty()) throw std::invalid_argument("front needs >= 1 point");
    const std::size_t m = points_[0].arity();
    for (const auto& p : points_) {
        if (p.arity() != m) throw std::invalid_argument("front has mixed arity");
        if (normalized_)
            for (std::size_t i = 0; i < m; ++i)
                if (p[i] < -1e-12 || p[i] > 1.0 + 1e-12)
                    throw std::invalid_argument("front flagged normalized has value outside [0,1]");
    }
}

ReferencePoint default_reference_point(std::size_t arity, double margin) {
    return ReferencePoint{std::vector<double>(arity, margin)};
}

double generational_distance(const Front& predicted, const Front& actual) {
    check_comparable(predicted, actual, "generational_distance");
    double sum = 0.0;
    for (const auto& p : predicted.points()) sum += nearest_distance(p, actual);
    return sum / static_cast<double>(predicted.size());
}

double inverted_generational_distance(const Front& actual, const Front& predicted) {
    return generational_distance(actual, predicted);
}

SpreadResult spread(const Front& predicted) {
    if (predicted.size() < 2) throw std::invalid_argument("spread needs >= 2 points");
    const std::size_t n = predicted.size();
    std::vector<double> gaps;

    if (predicted.arity() == 2) {
        // Consecutive gaps along the front sorted by the first objective.
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& pa = predicted.points()[a];
            const auto& pb = predicted.points()[b];
            return pa[0] != pb[0] ? pa[0] < pb[0] : pa[1] < pb[1];
        });
        gaps.reserve(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            gaps.push_back(euclidean_distance(predicted.points()[order[i]].canonical(),
                                              predicted.points()[order[i + 1]].canonical()));
    } else {
        // Nearest-neighbor gap per point.
        gaps.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    best = std::min(best, euclidean_distance(predicted.points()[i].canonical(),
                                                             predicted.points()[j].canonical()));
            gaps.push_back(best);
        }
    }

    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= static_cast<double>(gaps.size());

    // Boundary terms d_f and d_l are distances from the sorted extremes to
    // P's own boundary points, which coincide here, so both are 0.
    const double d_f = 0.0, d_l = 0.0;
    double num = d_f + d_l;
    for (double g : gaps) num += std::abs(g - mean);
    const double den = d_f + d_l + static_cast<double>(gaps.size()) * mean;
    if (den == 0.0) return {0.0, true};
    return {num / den, false};
}

HypervolumeResult hypervolume_exact(const Front& predicted, const ReferencePoint& ref) {
    const std::size_t m = predicted.arity();
    if (ref.values.size() != m)
        throw std::invalid_argument("hypervolume: reference point arity mismatch");
    for (const auto& p : predicted.points())
        for (std::size_t i = 0; i < m; ++i)
            if (p[i] > ref.values[i])
                throw std::invalid_argument(
                    "hypervolume: front point outside the reference box");
    if (m == 2) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(predicted.size());
        for (const auto& p : predicted.points()) pts.emplace_back(p[0], p[1]);
        return {hv2(std::move(pts), ref.values[0], ref.values[1]), true};
    }
    if (m == 3) {
        // Slice along the third objective: between consecutive z-levels the
        // dominated area is the 2-D hypervolume of the points at or below
        // the slice floor.
        std::vector<double> zs;
        zs.reserve(predicted.size());
        for (const auto& p : predicted.points()) zs.push_back(p[2]);
        std::sort(zs.begin(), zs.end());
        zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
        double volume = 0.0;
        for (std::size_t k = 0; k < zs.size(); ++k) {
            const double z_lo = zs[k];
            const double z_hi = (k + 1 < zs.size()) ? zs[k + 1] : ref.values[2];
            if (z_hi <= z_lo) continue;
            std::vector<std::pair<double, double>> slab;
            for (const auto& p : predicted.points())
                if (p[2] <= z_lo) slab.emplace_back(p[0], p[1]);
            volume += hv2(std::move(slab), ref.values[0], ref.values[1]) * (z_hi - z_lo);
        }
        return {volume, true};
    }
    if (m == 1) {
        double best = predicted.points()[0][0];
        for (const auto& p : predicted.points()) best = std::min(best, p[0]);
        return {ref.values[0] - best, true};
    }
    throw std::invalid_argument("exact hypervolume supports m <= 3; use the Monte Carlo estimate");
}

HypervolumeResult hypervolume_monte_carlo(const Front& predicted, const ReferencePoint& ref,
                                          std::size_t samples, SeededRng& rng) {
    const std::size_t m = predicted.arity();
    if (ref.values.size() != m)
        throw std::invalid_argument("hypervolume: reference point arity mismatch");
    if (samples == 0) throw std::invalid_argument("hypervolume: sample count must be > 0");
    std::vector<double> lo(m, std::numeric_limits<double>::infinity());
    for (const auto& p : predicted.points())
        for (std::size_t i = 0; i < m; ++i) {
            if (p[i] > ref.values[i])
                throw std::invalid_argument(
                    "hypervolume: front point outside the reference box");
            lo[i] = std::min(lo[i], p[i]);
        }
    double box = 1.0;
    for (std::size_t i = 0; i < m; ++i) box *= ref.values[i] - lo[i];
    if (box <= 0.0) return {0.0, false};

    std::vector<double> sample(m);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < m; ++i) sample[i] = rng.uniform(lo[i], ref.values[i]);
        for (const auto& p : predicted.points()) {
            bool dominates_sample = true;
            for (std::size_t i = 0; i < m; ++i)
                if (p[i] > sample[i]) {
                    dominates_sample = false;
                    break;
                }
            if (dominates_sample) {
                ++hits;
                break;
            }
        }
    }
    return {box * static_cast<double>(hits) / static_cast<double>(samples), false};
}

HypervolumeResult hypervolume(const Front& predicted, const ReferencePoint& ref,
                              std::size_t samples, SeededRng& rng) {
    if (predicted.arity() <= 3) return hypervolume_exact(predicted, ref);
    return hypervolume_monte_carlo(predicted, ref, samples, rng);
}

double additive_approximation(const Front& actual, const Front& predicted) {
    check_comparable(actual, predicted, "additive_approximation");
    double alpha = -std::numeric_limits<double>::infinity();
    for (const auto& a : actual.points()) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : predicted.points())
            best = std::min(best, epsilon_indicator(p, a));
        alpha = std::max(alpha, best);
    }
    return alpha;
}

Front build_reference_front(std::span<const std::vector<ObjectiveVector>> outcomes) {
    std::vector<ObjectiveVector> all;
    for (const auto& front : outcomes) all.insert(all.end(), front.begin(), front.end());
    if (all.empty()) throw std::invalid_argument("build_reference_front: no points");
    std::vector<ObjectiveVector> survivors;
    for (std::size_t i : nondominated_indices(all)) {
        const auto& candidate = all[i];
        if (std::find(survivors.begin(), survivors.end(), candidate) == survivors.end())
            survivors.push_back(candidate);
    }
    return Front(std::move(survivors), false);
}

Front build_reference_front(std::span<const Front> outcomes) {
    std::vector<std::vector<ObjectiveVector>> raw;
    raw.reserve(outcomes.size());
    for (const auto& f : outcomes) raw.push_back(f.points());
    return build_reference_front(raw);
}

}  // namespace dsekit
