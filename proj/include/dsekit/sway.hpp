#pragma once

// The SWAY sampling optimizer: oversample the decision space cheaply,
// cluster WITHOUT evaluating, evaluate only two representatives per
// cluster, prune the half whose representative loses by binary domination,
// recurse. On decisive splits the whole run costs O(log N) evaluations of
// the N initial candidates.

#include "dsekit/optimizers.hpp"

namespace dsekit {

enum class SwayDistance { auto_select, euclidean, hamming };
enum class SwayRepresentative { poles, random_member };

struct SwayParams {
    int initial_size = 10000;
    int enough = 0;  // 0 means ceil(sqrt(initial_size)); clusters this small are leaves
    SwayDistance distance = SwayDistance::auto_select;  // hamming for all-boolean spaces
    SwayRepresentative representatives = SwayRepresentative::poles;
};

struct FastmapSplit {
    std::size_t west_pole, east_pole;        // positions within the input list
    std::vector<std::size_t> west_half, east_half;
    bool degenerate = false;                 // all pairwise distances were zero
};

// Distance between two solutions: per-decision min-max-scaled Euclidean
// (categorical/boolean contribute 0/1 per decision) or Hamming.
double sway_distance(const DecisionSpace& space, const Solution& a, const Solution& b,
                     SwayDistance kind);

// Pick a random pivot, take the farthest point as the east pole and the
// point farthest from it as the west pole, project everyone onto the
// west-east axis by the cosine rule, split at the median projection.
// Halves differ in size by at most one; performs zero problem evaluations.
FastmapSplit fastmap_split(const DecisionSpace& space, std::span<const Solution> pop,
                           SwayDistance distance, SeededRng& rng);

RunResult sway(const Problem& problem, const SwayParams& params, int budget, std::uint64_t seed);

}  // namespace dsekit
