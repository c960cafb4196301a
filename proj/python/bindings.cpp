// Python bindings for the main dsekit operations. Everything crosses the
// boundary as plain lists/dicts of built-in types; fronts are lists of
// per-objective value lists in minimize form.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "dsekit/feature_model.hpp"
#include "dsekit/flash.hpp"
#include "dsekit/harness.hpp"
#include "dsekit/indicators.hpp"
#include "dsekit/sway.hpp"

namespace py = pybind11;
using namespace dsekit;

namespace {

using Row = std::vector<double>;
using Rows = std::vector<Row>;

std::vector<ObjectiveVector> to_front(const Rows& rows) {
    std::vector<ObjectiveVector> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(ObjectiveVector::minimizing(r));
    return out;
}

Rows from_front(const std::vector<ObjectiveVector>& front) {
    Rows out;
    out.reserve(front.size());
    for (const auto& p : front) {
        Row r(p.arity());
        for (std::size_t i = 0; i < p.arity(); ++i) r[i] = p[i];
        out.push_back(std::move(r));
    }
    return out;
}

Solution to_solution(const DecisionSpace& space, const Row& values) {
    if (values.size() != space.size())
        throw std::invalid_argument("solution arity does not match the decision space");
    Solution s;
    s.values.reserve(values.size());
    for (std::size_t d = 0; d < values.size(); ++d) {
        const auto& kind = space[d].kind;
        if (std::holds_alternative<ContinuousKind>(kind)) s.values.emplace_back(values[d]);
        else if (std::holds_alternative<IntegerKind>(kind))
            s.values.emplace_back(static_cast<long long>(std::llround(values[d])));
        else if (std::holds_alternative<BooleanKind>(kind))
            s.values.emplace_back(values[d] != 0.0);
        else
            s.values.emplace_back(CatLevel{static_cast<std::int32_t>(std::llround(values[d]))});
    }
    return s;
}

AlgorithmSpec make_spec(const std::string& algorithm,
                        const std::map<std::string, std::string>& params) {
    AlgorithmSpec spec;
    spec.name = algorithm;
    spec.label = algorithm;
    spec.params.assign(params.begin(), params.end());
    return spec;
}

}  // namespace

PYBIND11_MODULE(_dsekit, m) {
    m.doc() = "data-driven search-based software engineering toolkit";

    // -- core -----------------------------------------------------------------
    m.def(
        "dominates",
        [](const Row& u, const Row& v) {
            return dominates(ObjectiveVector::minimizing(u), ObjectiveVector::minimizing(v));
        },
        py::arg("u"), py::arg("v"),
        "True iff u is no worse everywhere and strictly better somewhere (minimize form).");
    m.def(
        "nondominated_indices",
        [](const Rows& front) { return nondominated_indices(to_front(front)); },
        py::arg("front"), "Indices of the points dominated by no other point, order preserved.");
    m.def(
        "epsilon_indicator",
        [](const Row& u, const Row& v) {
            return epsilon_indicator(ObjectiveVector::minimizing(u),
                                     ObjectiveVector::minimizing(v));
        },
        py::arg("u"), py::arg("v"));
    m.def(
        "minkowski_distance",
        [](const Row& x, const Row& y, double n) { return minkowski_distance(x, y, n); },
        py::arg("x"), py::arg("y"), py::arg("n") = 2.0);
    m.def(
        "normalize_front",
        [](const Rows& front, std::optional<std::pair<Row, Row>> bounds) {
            std::optional<ObjectiveBounds> b;
            if (bounds) b = ObjectiveBounds{bounds->first, bounds->second};
            return from_front(normalize_front(to_front(front), b));
        },
        py::arg("front"), py::arg("bounds") = py::none(),
        "Min-max normalization per objective; bounds default to the front's own.");

    // -- indicators ------------------------------------------------------------
    m.def(
        "generational_distance",
        [](const Rows& predicted, const Rows& actual) {
            return generational_distance(Front(to_front(predicted)), Front(to_front(actual)));
        },
        py::arg("predicted"), py::arg("actual"));
    m.def(
        "inverted_generational_distance",
        [](const Rows& actual, const Rows& predicted) {
            return inverted_generational_distance(Front(to_front(actual)),
                                                  Front(to_front(predicted)));
        },
        py::arg("actual"), py::arg("predicted"));
    m.def(
        "spread", [](const Rows& predicted) { return spread(Front(to_front(predicted))).value; },
        py::arg("predicted"));
    m.def(
        "hypervolume",
        [](const Rows& predicted, std::optional<Row> ref, std::size_t samples,
           std::uint64_t seed) {
            const Front front(to_front(predicted));
            const ReferencePoint reference =
                ref ? ReferencePoint{*ref} : default_reference_point(front.arity());
            SeededRng rng(seed);
            const auto hv = hypervolume(front, reference, samples, rng);
            return py::make_tuple(hv.value, hv.exact);
        },
        py::arg("predicted"), py::arg("ref") = py::none(), py::arg("samples") = 100000,
        py::arg("seed") = 1,
        "Returns (value, exact); exact for m <= 3, Monte Carlo estimate above.");
    m.def(
        "additive_approximation",
        [](const Rows& actual, const Rows& predicted) {
            return additive_approximation(Front(to_front(actual)), Front(to_front(predicted)));
        },
        py::arg("actual"), py::arg("predicted"));
    m.def(
        "reference_front",
        [](const std::vector<Rows>& outcomes) {
            std::vector<std::vector<ObjectiveVector>> fronts;
            fronts.reserve(outcomes.size());
            for (const auto& o : outcomes) fronts.push_back(to_front(o));
            return from_front(build_reference_front(fronts).points());
        },
        py::arg("outcomes"), "Non-dominated union of all outcome fronts, duplicates removed.");

    // -- problems ----------------------------------------------------------------
    m.def(
        "evaluate",
        [](const std::string& problem_spec, const Row& x) {
            const Problem p = resolve_problem(problem_spec);
            const ObjectiveVector obj = p.evaluate(to_solution(p.space, x));
            Row out(obj.arity());
            for (std::size_t i = 0; i < obj.arity(); ++i) out[i] = obj.original(i);
            return out;
        },
        py::arg("problem"), py::arg("x"),
        "Evaluate a builtin or file-backed problem spec, e.g. 'zdt1 n=30'.");
    m.def(
        "goal_metrics",
        [](long long a, long long b, long long c, long long d, double l_a, double l_b, double l_c,
           double l_d) {
            py::dict out;
            for (const auto& [name, value] : goal_metrics({a, b, c, d, l_a, l_b, l_c, l_d})) {
                if (value) out[py::str(name)] = *value;
                else out[py::str(name)] = py::none();
            }
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), py::arg("l_a") = 1.0,
        py::arg("l_b") = 1.0, py::arg("l_c") = 1.0, py::arg("l_d") = 1.0,
        "Confusion-matrix goals (pd, pf, prec, acc, support, effort, reward); None = undefined.");
    m.def(
        "count_violations",
        [](const std::string& model_text, const std::vector<bool>& selection) {
            const FeatureModel model = parse_feature_model(model_text);
            Product p;
            p.selected.assign(selection.begin(), selection.end());
            return count_violations(model, p);
        },
        py::arg("model_text"), py::arg("selection"));
    m.def(
        "feature_names",
        [](const std::string& model_text) { return parse_feature_model(model_text).features; },
        py::arg("model_text"));

    // -- optimizers ------------------------------------------------------------------
    m.def(
        "run",
        [](const std::string& algorithm, const std::string& problem_spec, int budget,
           std::uint64_t seed, const std::map<std::string, std::string>& params) {
            const Problem p = resolve_problem(problem_spec, ".", seed);
            const RunResult result =
                run_algorithm(make_spec(algorithm, params), p, budget, seed);
            py::dict out;
            out["front"] = from_front(result.archive.objectives());
            out["evals_used"] = result.evals_used;
            out["truncated"] = result.truncated;
            out["seed"] = result.seed;
            return out;
        },
        py::arg("algorithm"), py::arg("problem"), py::arg("budget"), py::arg("seed") = 1,
        py::arg("params") = std::map<std::string, std::string>{},
        "Run random_search, sa, de, ga, sway or flash on a problem spec.");

    // -- statistics -------------------------------------------------------------------
    m.def(
        "cliffs_delta",
        [](const Row& xs, const Row& ys) { return cliffs_delta(xs, ys); }, py::arg("xs"),
        py::arg("ys"));
    m.def(
        "bootstrap_different",
        [](const Row& xs, const Row& ys, std::uint64_t seed, int n_boot) {
            return bootstrap_different(xs, ys, seed, n_boot);
        },
        py::arg("xs"), py::arg("ys"), py::arg("seed") = 1, py::arg("n_boot") = 512);
    m.def(
        "scott_knott",
        [](const std::map<std::string, Row>& groups, std::uint64_t seed) {
            return scott_knott(groups, seed);
        },
        py::arg("groups"), py::arg("seed") = 1,
        "Rank sample groups; equal ranks are statistically indistinguishable.");
    m.def(
        "reproducibility",
        [](const Row& samples) {
            const Reproducibility r = reproducibility(samples);
            return py::make_tuple(r.cv ? py::cast(*r.cv) : py::none(),
                                  r.reproducibility ? py::cast(*r.reproducibility) : py::none());
        },
        py::arg("samples"), "Returns (cv, 1/cv); None marks undefined values.");

    m.attr("__version__") = "0.1.0";
}
