#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dsekit/core.hpp"

using namespace dsekit;

namespace {

ObjectiveVector ov(std::vector<double> v) { return ObjectiveVector::minimizing(std::move(v)); }

std::vector<ObjectiveVector> random_points(std::size_t count, std::size_t arity, SeededRng& rng) {
    std::vector<ObjectiveVector> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> v(arity);
        for (auto& x : v) x = rng.uniform01();
        pts.push_back(ov(std::move(v)));
    }
    return pts;
}

// Independent O(n^2) Pareto oracle: a point survives iff no other point is
// <= everywhere and < somewhere.
std::vector<std::size_t> brute_force_pareto(const std::vector<ObjectiveVector>& pts) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i == j) continue;
            bool all_le = true, some_lt = false;
            for (std::size_t k = 0; k < pts[i].arity(); ++k) {
                if (pts[j][k] > pts[i][k]) all_le = false;
                if (pts[j][k] < pts[i][k]) some_lt = true;
            }
            if (all_le && some_lt) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(i);
    }
    return out;
}

}  // namespace

TEST_CASE("dominates basics") {
    CHECK(dominates(ov({0, 0}), ov({1, 1})));
    CHECK_FALSE(dominates(ov({0, 1}), ov({1, 0})));
    CHECK_FALSE(dominates(ov({1, 0}), ov({0, 1})));
    CHECK_FALSE(dominates(ov({1, 1}), ov({1, 1})));
    CHECK_THROWS_AS(dominates(ov({1, 1}), ov({1, 1, 1})), std::invalid_argument);
}

TEST_CASE("dominates is irreflexive, antisymmetric and transitive on samples") {
    SeededRng rng(7);
    const auto pts = random_points(60, 3, rng);
    for (const auto& p : pts) CHECK_FALSE(dominates(p, p));
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (dominates(pts[i], pts[j])) CHECK_FALSE(dominates(pts[j], pts[i]));
    for (std::size_t i = 0; i < 30; ++i) {
        const auto a = pts[rng.pick(pts.size())];
        const auto b = pts[rng.pick(pts.size())];
        const auto c = pts[rng.pick(pts.size())];
        if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
    }
}

TEST_CASE("scaling objectives by a positive constant changes no dominance outcome") {
    SeededRng rng(8);
    const auto pts = random_points(40, 2, rng);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
        const auto& u = pts[i];
        const auto& v = pts[i + 1];
        const auto scale = [](const ObjectiveVector& p, double c) {
            std::vector<double> s;
            for (std::size_t k = 0; k < p.arity(); ++k) s.push_back(p[k] * c);
            return ov(s);
        };
        CHECK(dominates(u, v) == dominates(scale(u, 17.0), scale(v, 17.0)));
    }
}

TEST_CASE("nondominated_filter matches examples and brute force") {
    const auto make = [](std::vector<std::vector<double>> rows) {
        std::vector<EvaluatedSolution> set;
        int idx = 1;
        for (auto& r : rows) set.push_back({Solution{}, ov(std::move(r)), idx++});
        return set;
    };
    const auto fronts_of = [](const ParetoArchive& a) {
        std::vector<std::vector<double>> out;
        for (const auto& m : a.members()) {
            std::vector<double> v;
            for (std::size_t i = 0; i < m.objectives.arity(); ++i) v.push_back(m.objectives[i]);
            out.push_back(v);
        }
        return out;
    };

    CHECK(fronts_of(nondominated_filter(make({{0, 0}, {1, 1}}))) ==
          std::vector<std::vector<double>>{{0, 0}});
    CHECK(fronts_of(nondominated_filter(make({{0, 1}, {1, 0}, {2, 2}}))) ==
          std::vector<std::vector<double>>{{0, 1}, {1, 0}});
    CHECK(nondominated_filter({}).empty());

    SeededRng rng(11);
    const auto pts = random_points(200, 3, rng);
    std::vector<EvaluatedSolution> set;
    int idx = 1;
    for (const auto& p : pts) set.push_back({Solution{}, p, idx++});
    const auto filtered = nondominated_filter(set);
    const auto expected = brute_force_pareto(pts);
    REQUIRE(filtered.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(filtered.members()[i].objectives == pts[expected[i]]);
}

TEST_CASE("nondominated_filter is idempotent") {
    SeededRng rng(13);
    const auto pts = random_points(100, 3, rng);
    std::vector<EvaluatedSolution> set;
    int idx = 1;
    for (const auto& p : pts) set.push_back({Solution{}, p, idx++});
    const auto once = nondominated_filter(set);
    const auto twice = nondominated_filter(once.members());
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i)
        CHECK(once.members()[i].objectives == twice.members()[i].objectives);
}

TEST_CASE("epsilon indicator") {
    CHECK(epsilon_indicator(ov({0.3, 0.4}), ov({0.3, 0.4})) == 0.0);
    CHECK(epsilon_indicator(ov({0, 0}), ov({0.5, 0.5})) == -0.5);
    CHECK_THROWS_AS(epsilon_indicator(ov({0, 0}), ov({0.5})), std::invalid_argument);

    SeededRng rng(17);
    for (int i = 0; i < 50; ++i) {
        const auto u = random_points(1, 4, rng)[0];
        const auto v = random_points(1, 4, rng)[0];
        double expected = -1e300;
        for (std::size_t k = 0; k < 4; ++k) expected = std::max(expected, u[k] - v[k]);
        CHECK(epsilon_indicator(u, v) == doctest::Approx(expected).epsilon(1e-12));
        // eps <= 0 iff u weakly dominates v
        bool weak = true;
        for (std::size_t k = 0; k < 4; ++k)
            if (u[k] > v[k]) weak = false;
        CHECK((epsilon_indicator(u, v) <= 0) == weak);
    }
}

TEST_CASE("indicator fitness") {
    const std::vector<ObjectiveVector> twins{ov({0.5, 0.5}), ov({0.5, 0.5})};
    const auto f = indicator_fitnesses(twins, 0.05);
    CHECK(f[0] == f[1]);

    // Singleton + 1: the single term is exactly -exp(-eps(y,x)/kappa).
    const std::vector<ObjectiveVector> pair{ov({0.2, 0.6}), ov({0.4, 0.3})};
    const double kappa = 0.05;
    const double eps_10 = epsilon_indicator(pair[1], pair[0]);
    CHECK(indicator_fitness(pair, 0, kappa) ==
          doctest::Approx(-std::exp(-eps_10 / kappa)).epsilon(1e-12));

    // 3-member set where one member dominates everything: enumerate the six
    // epsilon terms by hand.
    const std::vector<ObjectiveVector> trio{ov({0.1, 0.1}), ov({0.5, 0.3}), ov({0.4, 0.6})};
    const auto eps = [&](std::size_t y, std::size_t x) {
        double e = -1e300;
        for (std::size_t k = 0; k < 2; ++k) e = std::max(e, trio[y][k] - trio[x][k]);
        return e;
    };
    std::vector<double> expected(3, 0.0);
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 3; ++y)
            if (x != y) expected[x] -= std::exp(-eps(y, x) / kappa);
    const auto got = indicator_fitnesses(trio, kappa);
    for (std::size_t i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(got[0] > got[1]);
    CHECK(got[0] > got[2]);

    CHECK_THROWS_AS(indicator_fitness({&trio[0], 1}, 0, kappa), std::invalid_argument);
}

TEST_CASE("best-on-every-objective member gets the strictly greatest fitness") {
    SeededRng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        auto pts = random_points(10, 3, rng);
        // Plant a member that is best everywhere.
        std::vector<double> best(3, 2.0);
        for (const auto& p : pts)
            for (std::size_t k = 0; k < 3; ++k) best[k] = std::min(best[k], p[k]);
        for (auto& b : best) b -= 0.01;
        pts.push_back(ov(best));
        const auto fitness = indicator_fitnesses(pts, 0.05);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) CHECK(fitness.back() > fitness[i]);
    }
}

TEST_CASE("normalize_front") {
    // Objective i spanning [0, 2i] maps to [0, 1].
    std::vector<ObjectiveVector> wide{ov({0, 0, 0}), ov({2, 4, 6}), ov({1, 2, 3})};
    const auto normed = normalize_front(wide);
    CHECK(normed[0].canonical()[0] == 0.0);
    CHECK(normed[1].canonical()[0] == 1.0);
    CHECK(normed[1].canonical()[2] == 1.0);
    CHECK(normed[2].canonical()[1] == doctest::Approx(0.5));

    const auto single = normalize_front(std::vector<ObjectiveVector>{ov({3, 7})});
    CHECK(single[0].canonical()[0] == 0.0);
    CHECK(single[0].canonical()[1] == 0.0);

    const auto two = normalize_front(std::vector<ObjectiveVector>{ov({1, 10}), ov({3, 30})});
    CHECK(two[0] == ov({0, 0}));
    CHECK(two[1] == ov({1, 1}));

    CHECK_THROWS_AS(normalize_front(std::vector<ObjectiveVector>{}), std::invalid_argument);
}

TEST_CASE("normalization preserves per-objective order") {
    SeededRng rng(29);
    auto pts = random_points(50, 2, rng);
    const auto normed = normalize_front(pts);
    for (std::size_t k = 0; k < 2; ++k) {
        std::size_t argmin_raw = 0, argmin_norm = 0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (pts[i][k] < pts[argmin_raw][k]) argmin_raw = i;
            if (normed[i][k] < normed[argmin_norm][k]) argmin_norm = i;
        }
        CHECK(argmin_raw == argmin_norm);
    }
}

TEST_CASE("minkowski distance") {
    const std::vector<double> a{1.0, 2.0}, b{1.0, 2.0};
    CHECK(minkowski_distance(a, b, 2.0) == 0.0);
    CHECK(minkowski_distance(std::vector<double>{0, 0}, std::vector<double>{3, 4}, 2.0) ==
          doctest::Approx(5.0));
    CHECK(minkowski_distance(std::vector<double>{0, 0}, std::vector<double>{1, 1}, 3.0) ==
          doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(minkowski_distance(a, b, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(minkowski_distance(a, std::vector<double>{1.0}, 2.0), std::invalid_argument);
    // Positivity and identity on random vectors.
    SeededRng rng(31);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> x(4), y(4);
        for (auto& v : x) v = rng.uniform(-3, 3);
        for (auto& v : y) v = rng.uniform(-3, 3);
        CHECK(minkowski_distance(x, y, 1.5) >= 0.0);
        CHECK(minkowski_distance(x, y, 2.0) ==
              doctest::Approx(euclidean_distance(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("objective vector canonical form") {
    const ObjectiveVector v({1.0, 2.0}, {Direction::minimize, Direction::maximize});
    CHECK(v[0] == 1.0);
    CHECK(v[1] == -2.0);  // canonical minimize form
    CHECK(v.original(0) == 1.0);
    CHECK(v.original(1) == 2.0);  // reading a maximize objective back un-negates
    CHECK_THROWS_AS(ObjectiveVector({std::nan("")}, {Direction::minimize}), std::invalid_argument);
    CHECK_THROWS_AS(ObjectiveVector({1.0 / 0.0}, {Direction::minimize}), std::invalid_argument);
    CHECK_THROWS_AS(ObjectiveVector({}, {}), std::invalid_argument);
}

TEST_CASE("pareto archive stays mutually non-dominated") {
    SeededRng rng(37);
    ParetoArchive archive;
    int idx = 1;
    for (const auto& p : random_points(300, 3, rng))
        archive.insert({Solution{}, p, idx++});
    const auto& members = archive.members();
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j)
            if (i != j) CHECK_FALSE(dominates(members[i].objectives, members[j].objectives));
    // Exact duplicates are dropped.
    ParetoArchive dedupe;
    dedupe.insert({Solution{}, ov({1, 2}), 1});
    CHECK_FALSE(dedupe.insert({Solution{}, ov({1, 2}), 2}));
    CHECK(dedupe.size() == 1);
}

TEST_CASE("budget") {
    Budget b(2);
    CHECK(b.remaining() == 2);
    b.consume();
    b.consume();
    CHECK(b.exhausted());
    CHECK(b.used() == 2);
    CHECK_THROWS_AS(b.consume(), budget_exhausted);
    CHECK_THROWS_AS(Budget(0), std::invalid_argument);
}

TEST_CASE("decision space invariants") {
    CHECK_THROWS_AS(DecisionSpace({}), std::invalid_argument);
    CHECK_THROWS_AS(DecisionSpace({{"x", ContinuousKind{1.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(DecisionSpace({{"k", IntegerKind{5, 2}}}), std::invalid_argument);
    CHECK_THROWS_AS(DecisionSpace({{"c", CategoricalKind{{"only"}}}}), std::invalid_argument);
    CHECK_THROWS_AS(DecisionSpace({{"c", CategoricalKind{{"a", "a"}}}}), std::invalid_argument);
    CHECK_THROWS_AS(DecisionSpace({{"x", BooleanKind{}}, {"x", BooleanKind{}}}),
                    std::invalid_argument);

    const DecisionSpace space({{"x", ContinuousKind{0, 1}},
                               {"k", IntegerKind{0, 5}},
                               {"b", BooleanKind{}},
                               {"c", CategoricalKind{{"red", "green"}}}});
    CHECK(space.size() == 4);
    CHECK_FALSE(space.all_boolean());
    CHECK_FALSE(space.all_numeric());

    Solution ok{{0.5, 3LL, true, CatLevel{1}}};
    CHECK_NOTHROW(validate_solution(space, ok));
    Solution bad_range{{1.5, 3LL, true, CatLevel{1}}};
    CHECK_THROWS_AS(validate_solution(space, bad_range), std::invalid_argument);
    Solution bad_kind{{0.5, 3LL, true, 0.0}};
    CHECK_THROWS_AS(validate_solution(space, bad_kind), std::invalid_argument);
    Solution bad_arity{{0.5}};
    CHECK_THROWS_AS(validate_solution(space, bad_arity), std::invalid_argument);
}

TEST_CASE("seeded rng determinism and independence") {
    SeededRng a(424242), b(424242);
    for (int i = 0; i < 10000; ++i) CHECK(a.next_u64() == b.next_u64());

    // Independent instances never share state.
    SeededRng c(1), d(1);
    (void)c.next_u64();
    SeededRng e(2);
    const auto before = d.next_u64();
    (void)e.next_u64();
    SeededRng f(1);
    CHECK(f.next_u64() == before);

    SeededRng g(99);
    for (int i = 0; i < 1000; ++i) {
        const double u = g.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const long long k = g.uniform_int(-3, 3);
        CHECK(k >= -3);
        CHECK(k <= 3);
    }
    CHECK_NOTHROW(SeededRng(0));  // seed 0 is legal
}

TEST_CASE("random solutions are always in-domain") {
    const DecisionSpace space({{"x", ContinuousKind{-2, 7}},
                               {"k", IntegerKind{-4, 9}},
                               {"b", BooleanKind{}},
                               {"c", CategoricalKind{{"a", "b", "c"}}}});
    SeededRng rng(5);
    for (int i = 0; i < 500; ++i) CHECK_NOTHROW(validate_solution(space, random_solution(space, rng)));
}
