#include "dsekit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "dsekit/csv.hpp"

namespace dsekit {

ObjectiveVector Problem::evaluate(const Solution& s) const {
    validate_solution(space, s);
    std::vector<double> values = raw_evaluate(s);
    if (values.size() != num_objectives)
        throw std::runtime_error("problem '" + name + "' returned " +
                                 std::to_string(values.size()) + " objectives, expected " +
                                 std::to_string(num_objectives));
    return ObjectiveVector(std::move(values), directions);
}

// ---- synthetic benchmarks -----------------------------------------------------

namespace {

DecisionSpace unit_cube(std::size_t n) {
    std::vector<DecisionDescriptor> ds;
    ds.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        ds.push_back({"x" + std::to_string(i + 1), ContinuousKind{0.0, 1.0}});
    return DecisionSpace(std::move(ds));
}

std::vector<double> continuous_values(const Solution& s) {
    std::vector<double> x;
    x.reserve(s.values.size());
    for (const auto& v : s.values) x.push_back(std::get<double>(v));
    return x;
}

}  // namespace

Problem zdt(int variant, std::size_t n) {
    if (variant != 1 && variant != 3) throw std::invalid_argument("zdt: variant must be 1 or 3");
    if (n < 2) throw std::invalid_argument("zdt: needs n >= 2 decisions");
    Problem p{
        "zdt" + std::to_string(variant),
        unit_cube(n),
        2,
        {Direction::minimize, Direction::minimize},
        {},
        nullptr,
        {},
    };
    p.raw_evaluate = [variant, n](const Solution& s) {
        const auto x = continuous_values(s);
        const double f1 = x[0];
        double tail = 0.0;
        for (std::size_t i = 1; i < n; ++i) tail += x[i];
        const double g = 1.0 + 9.0 * tail / static_cast<double>(n - 1);
        double h = 1.0 - std::sqrt(f1 / g);
        if (variant == 3) h -= (f1 / g) * std::sin(10.0 * std::numbers::pi * f1);
        return std::vector<double>{f1, g * h};
    };
    p.true_front = [variant](std::size_t k) {
        // Evaluate the analytic front x2..xn = 0 on a grid of f1 values;
        // ZDT3's front is the non-dominated part of the curve.
        std::vector<ObjectiveVector> pts;
        pts.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double f1 = k == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(k - 1);
            double f2 = 1.0 - std::sqrt(f1);
            if (variant == 3) f2 -= f1 * std::sin(10.0 * std::numbers::pi * f1);
            pts.push_back(ObjectiveVector::minimizing({f1, f2}));
        }
        if (variant == 3) {
            std::vector<ObjectiveVector> nd;
            for (std::size_t i : nondominated_indices(pts)) nd.push_back(pts[i]);
            return nd;
        }
        return pts;
    };
    return p;
}

Problem dtlz2(std::size_t n, std::size_t m) {
    if (m < 2) throw std::invalid_argument("dtlz2: needs m >= 2 objectives");
    if (n < m) throw std::invalid_argument("dtlz2: needs n >= m");
    Problem p{
        "dtlz2",
        unit_cube(n),
        m,
        std::vector<Direction>(m, Direction::minimize),
        {},
        nullptr,
        {},
    };
    p.raw_evaluate = [n, m](const Solution& s) {
        const auto x = continuous_values(s);
        double g = 0.0;
        for (std::size_t i = m - 1; i < n; ++i) g += (x[i] - 0.5) * (x[i] - 0.5);
        std::vector<double> f(m, 1.0 + g);
        constexpr double half_pi = std::numbers::pi / 2.0;
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i + j + 1 < m; ++i) f[j] *= std::cos(x[i] * half_pi);
            if (j > 0) f[j] *= std::sin(x[m - 1 - j] * half_pi);
        }
        return f;
    };
    p.true_front = [m](std::size_t k) {
        // Points on the positive orthant of the unit sphere, from a fixed
        // low-discrepancy-ish seeded sample (grid for m == 2).
        std::vector<ObjectiveVector> pts;
        pts.reserve(k);
        if (m == 2) {
            constexpr double half_pi = std::numbers::pi / 2.0;
            for (std::size_t i = 0; i < k; ++i) {
                const double t =
                    k == 1 ? 0.0 : half_pi * static_cast<double>(i) / static_cast<double>(k - 1);
                pts.push_back(ObjectiveVector::minimizing({std::cos(t), std::sin(t)}));
            }
            return pts;
        }
        SeededRng rng(2718281828ULL);
        while (pts.size() < k) {
            std::vector<double> v(m);
            double norm = 0.0;
            for (auto& vi : v) {
                vi = rng.uniform01();
                norm += vi * vi;
            }
            norm = std::sqrt(norm);
            if (norm < 1e-9) continue;
            for (auto& vi : v) vi /= norm;
            pts.push_back(ObjectiveVector::minimizing(std::move(v)));
        }
        return pts;
    };
    return p;
}

Problem sphere(std::size_t n) {
    if (n < 1) throw std::invalid_argument("sphere: needs n >= 1");
    std::vector<DecisionDescriptor> ds;
    for (std::size_t i = 0; i < n; ++i)
        ds.push_back({"x" + std::to_string(i + 1), ContinuousKind{-5.12, 5.12}});
    Problem p{
        "sphere", DecisionSpace(std::move(ds)), 1, {Direction::minimize}, {}, nullptr, {},
    };
    p.raw_evaluate = [](const Solution& s) {
        double sum = 0.0;
        for (const auto& v : s.values) {
            const double x = std::get<double>(v);
            sum += x * x;
        }
        return std::vector<double>{sum};
    };
    return p;
}

// ---- tabular spaces --------------------------------------------------------------

TabularSpace::TabularSpace(DecisionSpace space, std::vector<Solution> rows,
                           std::vector<ObjectiveVector> measured)
    : space_(std::move(space)), rows_(std::move(rows)), measured_(std::move(measured)) {
    if (rows_.empty()) throw std::invalid_argument("tabular space has no rows");
    if (rows_.size() != measured_.size())
        throw std::invalid_argument("tabular rows/objectives count mismatch");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        validate_solution(space_, rows_[i]);
        if (measured_[i].arity() != measured_[0].arity())
            throw std::invalid_argument("tabular objectives have mixed arity");
        if (!index_.emplace(key_of(rows_[i]), i).second)
            throw std::invalid_argument("duplicate decision row " + std::to_string(i + 1));
    }
}

std::string TabularSpace::key_of(const Solution& s) {
    std::string key;
    for (const auto& v : s.values) {
        std::visit(
            [&key](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, double>) key += format_double(x);
                else if constexpr (std::is_same_v<T, long long>) key += std::to_string(x);
                else if constexpr (std::is_same_v<T, bool>) key += x ? '1' : '0';
                else key += 'c' + std::to_string(x.index);
            },
            v);
        key += '|';
    }
    return key;
}

const ObjectiveVector& TabularSpace::lookup(const Solution& s) const {
    const auto it = index_.find(key_of(s));
    if (it == index_.end())
        throw std::invalid_argument("decision tuple not in measured space");
    return measured_[it->second];
}

TabularSpace tabular_from_csv(const std::string& text, std::size_t num_objectives) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<std::vector<std::string>> raw;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (raw.empty()) {
            width = cells.size();
        } else if (cells.size() != width) {
            throw parse_error("ragged row: expected " + std::to_string(width) + " cells, got " +
                                  std::to_string(cells.size()),
                              lineno);
        }
        raw.push_back(std::move(cells));
    }
    if (raw.size() < 2) throw parse_error("tabular CSV needs a header and at least one row", lineno);
    if (num_objectives == 0 || num_objectives >= width)
        throw std::invalid_argument("tabular CSV: objective count must be in [1, columns)");
    const std::size_t k = width - num_objectives;

    // Header d1..dk,o1..om is validated when it follows that convention;
    // otherwise the last num_objectives columns are taken as objectives.
    const auto& header = raw[0];
    if (header[0] == "d1") {
        for (std::size_t i = 0; i < width; ++i) {
            const std::string expect =
                i < k ? "d" + std::to_string(i + 1) : "o" + std::to_string(i - k + 1);
            if (header[i] != expect)
                throw parse_error("tabular header mismatch: expected '" + expect + "', got '" +
                                      header[i] + "'",
                                  1);
        }
    }

    // A decision column is categorical when any cell is quoted or fails to
    // parse as a number.
    const std::size_t n_rows = raw.size() - 1;
    std::vector<bool> categorical(k, false);
    for (std::size_t col = 0; col < k; ++col)
        for (std::size_t r = 1; r <= n_rows && !categorical[col]; ++r) {
            const std::string& cell = raw[r][col];
            if (!cell.empty() && cell.front() == '"') categorical[col] = true;
            else {
                try {
                    (void)parse_double(cell, 0);
                } catch (const parse_error&) {
                    categorical[col] = true;
                }
            }
        }

    std::vector<DecisionDescriptor> descriptors;
    std::vector<std::vector<std::string>> level_tables(k);
    for (std::size_t col = 0; col < k; ++col) {
        const std::string name = col < header.size() && !header[col].empty()
                                     ? header[col]
                                     : "d" + std::to_string(col + 1);
        if (categorical[col]) {
            std::set<std::string> seen;
            for (std::size_t r = 1; r <= n_rows; ++r) {
                std::string cell = raw[r][col];
                if (!cell.empty() && cell.front() == '"') cell = cell.substr(1, cell.size() - 2);
                if (seen.insert(cell).second) level_tables[col].push_back(cell);
            }
            while (level_tables[col].size() < 2) {
                std::string filler = level_tables[col].back() + "_";
                while (std::find(level_tables[col].begin(), level_tables[col].end(), filler) !=
                       level_tables[col].end())
                    filler += "_";
                level_tables[col].push_back(filler);
            }
            descriptors.push_back({name, CategoricalKind{level_tables[col]}});
        } else {
            double lo = 0, hi = 0;
            for (std::size_t r = 1; r <= n_rows; ++r) {
                const double v = parse_double(raw[r][col], static_cast<int>(r + 1));
                if (r == 1) lo = hi = v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (!(lo < hi)) hi = lo + 1.0;  // constant column still needs a valid domain
            descriptors.push_back({name, ContinuousKind{lo, hi}});
        }
    }

    std::vector<Solution> rows;
    std::vector<ObjectiveVector> measured;
    rows.reserve(n_rows);
    measured.reserve(n_rows);
    for (std::size_t r = 1; r <= n_rows; ++r) {
        Solution s;
        for (std::size_t col = 0; col < k; ++col) {
            if (categorical[col]) {
                std::string cell = raw[r][col];
                if (!cell.empty() && cell.front() == '"') cell = cell.substr(1, cell.size() - 2);
                const auto& levels = level_tables[col];
                const auto it = std::find(levels.begin(), levels.end(), cell);
                s.values.push_back(
                    CatLevel{static_cast<std::int32_t>(std::distance(levels.begin(), it))});
            } else {
                s.values.push_back(parse_double(raw[r][col], static_cast<int>(r + 1)));
            }
        }
        std::vector<double> obj(num_objectives);
        for (std::size_t j = 0; j < num_objectives; ++j) {
            const std::string& cell = raw[r][k + j];
            if (!cell.empty() && cell.front() == '"')
                throw parse_error("objective cell is not numeric: " + cell,
                                  static_cast<int>(r + 1));
            obj[j] = parse_double(cell, static_cast<int>(r + 1));
        }
        rows.push_back(std::move(s));
        measured.push_back(ObjectiveVector::minimizing(std::move(obj)));
    }
    return TabularSpace(DecisionSpace(std::move(descriptors)), std::move(rows),
                        std::move(measured));
}

TabularSpace load_tabular(const std::string& path, std::size_t num_objectives) {
    return tabular_from_csv(read_text_file(path), num_objectives);
}

Problem tabular_problem(std::shared_ptr<const TabularSpace> space, std::string name) {
    if (!space) throw std::invalid_argument("tabular_problem: null space");
    const std::size_t m = space->num_objectives();
    Problem p{
        std::move(name),
        space->space(),
        m,
        std::vector<Direction>(m, Direction::minimize),
        {},
        std::shared_ptr<const std::vector<Solution>>(space, &space->rows()),
        {},
    };
    p.raw_evaluate = [space](const Solution& s) {
        const ObjectiveVector& measured = space->lookup(s);
        std::vector<double> out(measured.arity());
        for (std::size_t i = 0; i < measured.arity(); ++i) out[i] = measured[i];
        return out;
    };
    p.true_front = [space](std::size_t) {
        std::vector<ObjectiveVector> nd;
        for (std::size_t i : nondominated_indices(space->measured()))
            nd.push_back(space->measured()[i]);
        return nd;
    };
    return p;
}

// ---- confusion-matrix goals ---------------------------------------------------------

const std::vector<std::string>& goal_metric_names() {
    static const std::vector<std::string> names = {"pd",      "pf",     "prec",  "acc",
                                                   "support", "effort", "reward"};
    return names;
}

GoalMetrics goal_metrics(const ConfusionCounts& c) {
    if (c.a < 0 || c.b < 0 || c.c < 0 || c.d < 0 || c.l_a < 0 || c.l_b < 0 || c.l_c < 0 ||
        c.l_d < 0)
        throw std::invalid_argument("goal_metrics: counts must be >= 0");
    GoalMetrics out;
    const auto ratio = [](double num, double den) -> std::optional<double> {
        if (den <= 0) return std::nullopt;
        return num / den;
    };
    const double total = static_cast<double>(c.a + c.b + c.c + c.d);
    const double loc = c.l_a + c.l_b + c.l_c + c.l_d;
    out["pd"] = ratio(static_cast<double>(c.d), static_cast<double>(c.b + c.d));
    out["pf"] = ratio(static_cast<double>(c.c), static_cast<double>(c.a + c.c));
    out["prec"] = ratio(static_cast<double>(c.d), static_cast<double>(c.d + c.c));
    out["acc"] = ratio(static_cast<double>(c.a + c.d), total);
    out["support"] = ratio(static_cast<double>(c.c + c.d), total);
    out["effort"] = ratio(c.l_c + c.l_d, loc);
    const auto pd = out["pd"];
    const auto effort = out["effort"];
    if (pd && effort && *effort > 0) out["reward"] = *pd / *effort;
    else out["reward"] = std::nullopt;
    return out;
}

}  // namespace dsekit
