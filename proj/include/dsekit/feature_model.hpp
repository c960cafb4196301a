#pragma once

// Software product line feature models: a tree of features related by
// mandatory/optional edges and alternative/or groups, plus cross-tree
// requires/excludes constraints. A product is a bit string over features.
//
// Text format, one statement per line, `#` comments:
//   root <Name>
//   mandatory <Parent> <Child>
//   optional <Parent> <Child>
//   alt <Parent> <Child1> <Child2> ...
//   or <Parent> <Child1> ...
//   requires <A> <B>
//   excludes <A> <B>
// Parents must be declared (as root or as an earlier child) before use;
// requires/excludes may reference any feature declared anywhere in the file.

#include <string>
#include <vector>

#include "dsekit/core.hpp"
#include "dsekit/problems.hpp"

namespace dsekit {

enum class EdgeKind { mandatory, optional_ };
enum class GroupKind { alternative, or_ };
enum class CrossKind { requires_, excludes };

struct FeatureModel {
    struct Edge {
        std::size_t parent, child;
        EdgeKind kind;
    };
    struct Group {
        std::size_t parent;
        std::vector<std::size_t> children;
        GroupKind kind;
    };
    struct CrossConstraint {
        std::size_t a, b;
        CrossKind kind;
    };

    std::vector<std::string> features;  // index is the feature id
    std::size_t root = 0;
    std::vector<Edge> edges;
    std::vector<Group> groups;
    std::vector<CrossConstraint> cross_tree;

    std::size_t feature_count() const { return features.size(); }
    std::size_t feature_id(const std::string& name) const;  // throws on unknown name
};

struct Product {
    std::vector<std::uint8_t> selected;  // one flag per feature
};

// Parses and validates the text format above. Throws parse_error with the
// offending line number; distinct messages for missing/multiple roots,
// unknown feature references, re-parented features (cycles), and group
// arity < 2.
FeatureModel parse_feature_model(const std::string& text);

// Number of violated rules. 0 iff the product is valid. The counted rules:
//   - root unselected
//   - mandatory edge with sel[child] != sel[parent]
//   - non-mandatory child selected while its parent is not
//   - alternative group with selected parent and != 1 selected child
//   - or group with selected parent and 0 selected children
//   - requires(a, b) with a selected and b not
//   - excludes(a, b) with both selected
int count_violations(const FeatureModel& model, const Product& product);

// Per-feature cost/defects/used-before attributes.
struct ProductAttributes {
    std::vector<double> cost;
    std::vector<long long> defects;
    std::vector<std::uint8_t> used_before;
};

// Random attributes for experiments: cost ~ U[5,15], defects ~ U{0..10},
// used_before with probability 0.5. Persist with attributes_to_csv so runs
// are replayable.
ProductAttributes generate_attributes(const FeatureModel& model, SeededRng& rng);

// CSV `feature,cost,defects,used_before`, one row per feature.
std::string attributes_to_csv(const FeatureModel& model, const ProductAttributes& attrs);
ProductAttributes attributes_from_csv(const FeatureModel& model, const std::string& text);

// The five-objective SPL problem in canonical minimize form:
// (1) violations (min), (2) selected-feature count (max), (3) total known
// defects (min), (4) total cost (min), (5) features used before (max).
Problem spl_problem(const FeatureModel& model, const ProductAttributes& attrs,
                    std::string name = "spl");

Solution product_to_solution(const Product& p);
Product solution_to_product(const Solution& s);

}  // namespace dsekit
