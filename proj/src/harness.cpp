#include "dsekit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>
#include <thread>

#include "dsekit/csv.hpp"
#include "dsekit/feature_model.hpp"
#include "dsekit/flash.hpp"
#include "dsekit/sway.hpp"

namespace dsekit {

namespace {

long long to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("parameter " + key + " must be an integer, got '" + value + "'");
    }
}

double to_real(const std::string& key, const std::string& value) {
    try {
        return parse_double(value, 0);
    } catch (...) {
        throw std::invalid_argument("parameter " + key + " must be a number, got '" + value + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

// ---- plans -----------------------------------------------------------------

const std::vector<std::string>& known_indicators() {
    static const std::vector<std::string> names = {"gd", "igd", "spread", "hv", "approx"};
    return names;
}

bool indicator_is_maximized(const std::string& name) { return name == "hv"; }

ExperimentPlan parse_plan(const std::string& text) {
    ExperimentPlan plan;
    plan.indicators = known_indicators();
    bool saw_indicators = false;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string stmt;
        if (!(ls >> stmt) || stmt[0] == '#') continue;
        if (stmt == "problem") {
            std::string rest;
            std::getline(ls, rest);
            const auto hash = rest.find('#');
            if (hash != std::string::npos) rest = rest.substr(0, hash);
            const auto start = rest.find_first_not_of(" \t");
            if (start == std::string::npos) throw parse_error("problem needs a spec", lineno);
            const auto end = rest.find_last_not_of(" \t");
            plan.problems.push_back(rest.substr(start, end - start + 1));
        } else if (stmt == "algorithm") {
            AlgorithmSpec algo;
            if (!(ls >> algo.name)) throw parse_error("algorithm needs a name", lineno);
            std::string tok;
            while (ls >> tok) {
                if (tok[0] == '#') break;
                const auto eq = tok.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw parse_error("algorithm parameter must be key=value, got '" + tok + "'",
                                      lineno);
                algo.params.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
            }
            plan.algorithms.push_back(std::move(algo));
        } else if (stmt == "repeats" || stmt == "budget" || stmt == "base_seed" ||
                   stmt == "hv_samples") {
            std::string value;
            if (!(ls >> value)) throw parse_error(stmt + " needs a value", lineno);
            try {
                if (stmt == "repeats") plan.repeats = static_cast<int>(to_int(stmt, value));
                else if (stmt == "budget") plan.budget = static_cast<int>(to_int(stmt, value));
                else if (stmt == "hv_samples")
                    plan.hv_samples = static_cast<std::size_t>(to_int(stmt, value));
                else plan.base_seed = static_cast<std::uint64_t>(to_int(stmt, value));
            } catch (const std::invalid_argument& e) {
                throw parse_error(e.what(), lineno);
            }
        } else if (stmt == "indicators") {
            std::string value;
            if (!(ls >> value)) throw parse_error("indicators needs a comma list", lineno);
            plan.indicators.clear();
            for (const auto& name : split(value, ',')) {
                if (std::find(known_indicators().begin(), known_indicators().end(), name) ==
                    known_indicators().end())
                    throw parse_error("unknown indicator '" + name + "'", lineno);
                plan.indicators.push_back(name);
            }
            saw_indicators = true;
        } else {
            throw parse_error("unknown plan statement '" + stmt + "'", lineno);
        }
    }
    if (plan.problems.empty()) throw parse_error("plan declares no problems", lineno ? lineno : 1);
    if (plan.algorithms.empty())
        throw parse_error("plan declares no algorithms", lineno ? lineno : 1);
    if (plan.repeats < 1) throw parse_error("repeats must be >= 1", 1);
    if (plan.budget < 1) throw parse_error("budget must be >= 1", 1);
    if (!saw_indicators && plan.indicators.empty()) plan.indicators = known_indicators();

    // Labels: the algorithm name, disambiguated when repeated.
    std::map<std::string, int> counts;
    for (auto& a : plan.algorithms) ++counts[a.name];
    std::map<std::string, int> running;
    for (auto& a : plan.algorithms) {
        if (counts[a.name] == 1) a.label = a.name;
        else a.label = a.name + "#" + std::to_string(++running[a.name]);
    }
    return plan;
}

std::string serialize_plan(const ExperimentPlan& plan) {
    std::string out;
    for (const auto& p : plan.problems) out += "problem " + p + "\n";
    for (const auto& a : plan.algorithms) {
        out += "algorithm " + a.name;
        for (const auto& [k, v] : a.params) out += " " + k + "=" + v;
        out += "\n";
    }
    out += "repeats " + std::to_string(plan.repeats) + "\n";
    out += "budget " + std::to_string(plan.budget) + "\n";
    out += "base_seed " + std::to_string(plan.base_seed) + "\n";
    if (plan.hv_samples != ExperimentPlan{}.hv_samples)
        out += "hv_samples " + std::to_string(plan.hv_samples) + "\n";
    out += "indicators ";
    for (std::size_t i = 0; i < plan.indicators.size(); ++i) {
        if (i) out += ',';
        out += plan.indicators[i];
    }
    out += "\n";
    return out;
}

// ---- problem and algorithm registries --------------------------------------------

Problem resolve_problem(const std::string& spec, const std::string& base_dir,
                        std::uint64_t attr_seed) {
    std::istringstream in(spec);
    std::string head;
    if (!(in >> head)) throw std::invalid_argument("empty problem spec");
    std::map<std::string, std::string> kv;
    std::string tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("problem parameter must be key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    const auto int_param = [&](const std::string& key, long long fallback) {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : to_int(key, it->second);
    };

    if (head == "zdt1" || head == "zdt3") {
        return zdt(head == "zdt1" ? 1 : 3, static_cast<std::size_t>(int_param("n", 30)));
    }
    if (head == "dtlz2") {
        return dtlz2(static_cast<std::size_t>(int_param("n", 12)),
                     static_cast<std::size_t>(int_param("m", 3)));
    }
    if (head == "sphere") {
        return sphere(static_cast<std::size_t>(int_param("n", 20)));
    }
    if (head.rfind("spl:", 0) == 0) {
        const std::string model_path = resolve_path(head.substr(4), base_dir);
        const FeatureModel model = parse_feature_model(read_text_file(model_path));
        ProductAttributes attrs;
        if (kv.count("attrs")) {
            attrs = attributes_from_csv(model, read_text_file(resolve_path(kv["attrs"], base_dir)));
        } else {
            SeededRng rng(attr_seed);
            attrs = generate_attributes(model, rng);
        }
        return spl_problem(model, attrs, head);
    }
    if (head.rfind("tabular:", 0) == 0) {
        const std::string path = resolve_path(head.substr(8), base_dir);
        const std::string text = read_text_file(path);
        std::size_t m = static_cast<std::size_t>(int_param("m", 0));
        if (m == 0) {
            // Infer from a conventional d1..dk,o1..om header.
            const auto newline = text.find('\n');
            const auto header = split_csv_line(text.substr(0, newline));
            for (const auto& cell : header)
                if (!cell.empty() && cell[0] == 'o') ++m;
            if (m == 0)
                throw std::invalid_argument(
                    "tabular problem needs m=<objectives> (header is not d1..dk,o1..om)");
        }
        auto space = std::make_shared<const TabularSpace>(tabular_from_csv(text, m));
        return tabular_problem(std::move(space), head);
    }
    throw std::invalid_argument("unknown problem '" + head + "'");
}

RunResult run_algorithm(const AlgorithmSpec& algo, const Problem& problem, int budget,
                        std::uint64_t seed) {
    std::map<std::string, std::string> kv(algo.params.begin(), algo.params.end());
    const auto take_int = [&](const std::string& key, long long fallback) {
        const auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        const long long v = to_int(key, it->second);
        kv.erase(it);
        return v;
    };
    const auto take_real = [&](const std::string& key, double fallback) {
        const auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        const double v = to_real(key, it->second);
        kv.erase(it);
        return v;
    };
    const auto take_str = [&](const std::string& key, const std::string& fallback) {
        const auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    const auto finish = [&]() {
        if (!kv.empty())
            throw std::invalid_argument("unknown parameter '" + kv.begin()->first +
                                        "' for algorithm " + algo.name);
    };

    if (algo.name == "random_search") {
        RandomSearchParams p;
        p.without_replacement = take_int("without_replacement", 0) != 0;
        finish();
        return random_search(problem, budget, seed, p);
    }
    // Space-variation algorithms perturb decisions freely, which an
    // exact-lookup pool cannot answer (and pool-repair operators are out of
    // scope); only the pool-aware strategies accept tabular problems.
    if (problem.pool && (algo.name == "sa" || algo.name == "de" || algo.name == "ga"))
        throw std::invalid_argument(
            "algorithm " + algo.name +
            " explores the whole decision space; pool-backed (tabular) problems support "
            "random_search, sway and flash");

    if (algo.name == "sa") {
        SaParams p;
        p.t0 = take_real("t0", p.t0);
        p.alpha = take_real("alpha", p.alpha);
        p.neighbor_scale = take_real("neighbor_scale", p.neighbor_scale);
        const auto objective = static_cast<std::size_t>(take_int("objective_index", 0));
        finish();
        return simulated_annealing(problem, budget, p, seed, objective);
    }
    if (algo.name == "de") {
        DeParams p;
        p.np = static_cast<int>(take_int("np", 0));
        p.f = take_real("f", p.f);
        p.cr = take_real("cr", p.cr);
        const auto objective = static_cast<std::size_t>(take_int("objective_index", 0));
        finish();
        return differential_evolution(problem, budget, p, seed, objective);
    }
    if (algo.name == "ga") {
        GaParams p;
        p.pop_size = static_cast<int>(take_int("pop_size", p.pop_size));
        const std::string sel = take_str("selection", "indicator_dom");
        if (sel == "binary_dom") p.selection = SelectionKind::binary_dom;
        else if (sel == "indicator_dom") p.selection = SelectionKind::indicator_dom;
        else throw std::invalid_argument("ga: selection must be binary_dom or indicator_dom");
        p.crossover_prob = take_real("crossover_prob", p.crossover_prob);
        p.mutation_prob = take_real("mutation_prob", p.mutation_prob);
        p.sbx_eta = take_real("sbx_eta", p.sbx_eta);
        p.pm_eta = take_real("pm_eta", p.pm_eta);
        p.kappa = take_real("kappa", p.kappa);
        finish();
        return ga_multiobjective(problem, budget, p, seed);
    }
    if (algo.name == "sway") {
        SwayParams p;
        p.initial_size = static_cast<int>(take_int("initial_size", p.initial_size));
        p.enough = static_cast<int>(take_int("enough", 0));
        const std::string dist = take_str("distance", "auto");
        if (dist == "auto") p.distance = SwayDistance::auto_select;
        else if (dist == "euclidean") p.distance = SwayDistance::euclidean;
        else if (dist == "hamming") p.distance = SwayDistance::hamming;
        else throw std::invalid_argument("sway: distance must be auto, euclidean or hamming");
        const std::string rep = take_str("representatives", "poles");
        if (rep == "poles") p.representatives = SwayRepresentative::poles;
        else if (rep == "random") p.representatives = SwayRepresentative::random_member;
        else throw std::invalid_argument("sway: representatives must be poles or random");
        finish();
        return sway(problem, p, budget, seed);
    }
    if (algo.name == "flash") {
        FlashParams p;
        p.init_samples = static_cast<int>(take_int("init_samples", p.init_samples));
        p.min_leaf = static_cast<int>(take_int("min_leaf", p.min_leaf));
        p.epsilon = take_real("epsilon", p.epsilon);
        const std::string acq = take_str("acquisition", "dominance_count");
        if (acq == "dominance_count") p.acquisition = Acquisition::dominance_count;
        else if (acq == "single_objective_min") p.acquisition = Acquisition::single_objective_min;
        else
            throw std::invalid_argument(
                "flash: acquisition must be dominance_count or single_objective_min");
        finish();
        return flash(problem, p, budget, seed);
    }
    throw std::invalid_argument("unknown algorithm '" + algo.name + "'");
}

// ---- indicator computation ----------------------------------------------------------

namespace {

double compute_indicator(const std::string& name, const std::vector<ObjectiveVector>& run_front,
                         const std::vector<ObjectiveVector>& reference,
                         const ObjectiveBounds& bounds, std::size_t hv_samples,
                         std::uint64_t seed) {
    const auto norm_ref = normalize_front(reference, bounds);
    const auto norm_run = normalize_front(run_front, bounds);
    // Points dominated in the union can normalize above 1; flag the fronts
    // consistently so the indicator preconditions see matching status.
    bool in_range = true;
    for (const auto& p : norm_run)
        for (std::size_t i = 0; i < p.arity(); ++i)
            if (p[i] < -1e-12 || p[i] > 1.0 + 1e-12) in_range = false;
    const Front actual(norm_ref, in_range);
    const Front predicted(norm_run, in_range);

    if (name == "gd") return generational_distance(predicted, actual);
    if (name == "igd") return inverted_generational_distance(actual, predicted);
    if (name == "approx") return additive_approximation(actual, predicted);
    if (name == "spread") {
        if (predicted.size() < 2) return 0.0;  // single-point fronts carry no spacing
        return spread(predicted).value;
    }
    if (name == "hv") {
        const ReferencePoint ref = default_reference_point(predicted.arity());
        // Points outside the reference box contribute no volume.
        std::vector<ObjectiveVector> inside;
        for (const auto& p : norm_run) {
            bool ok = true;
            for (std::size_t i = 0; i < p.arity(); ++i)
                if (p[i] > ref.values[i]) ok = false;
            if (ok) inside.push_back(p);
        }
        if (inside.empty()) return 0.0;
        const Front hv_front(inside, false);
        SeededRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
        return hypervolume(hv_front, ref, hv_samples, rng).value;
    }
    throw std::invalid_argument("unknown indicator '" + name + "'");
}

}  // namespace

// ---- experiment execution -------------------------------------------------------------

ExperimentResult run_experiment(const ExperimentPlan& plan, const std::string& base_dir, int jobs,
                                bool timing) {
    ExperimentResult result;
    if (plan.repeats < 30)
        result.warnings.push_back(
            "repeats=" + std::to_string(plan.repeats) +
            " is below the recommended 30; rankings are indicative only");

    std::vector<Problem> problems;
    problems.reserve(plan.problems.size());
    for (const auto& spec : plan.problems)
        problems.push_back(resolve_problem(spec, base_dir, plan.base_seed));

    struct RunSpec {
        std::size_t problem_idx, algo_idx;
        int repeat;
        std::uint64_t seed;
    };
    std::vector<RunSpec> specs;
    std::set<std::uint64_t> seen_seeds;
    std::uint64_t next = plan.base_seed;
    for (std::size_t p = 0; p < problems.size(); ++p)
        for (std::size_t a = 0; a < plan.algorithms.size(); ++a)
            for (int r = 0; r < plan.repeats; ++r) {
                if (!seen_seeds.insert(next).second)
                    throw std::invalid_argument("derived per-run seeds collide (base_seed " +
                                                std::to_string(plan.base_seed) + " wraps)");
                specs.push_back({p, a, r, next});
                ++next;
            }

    result.records.resize(specs.size());
    const auto execute = [&](std::size_t i) {
        const RunSpec& spec = specs[i];
        RunRecord record;
        record.problem = plan.problems[spec.problem_idx];
        record.algorithm = plan.algorithms[spec.algo_idx].label;
        record.seed = spec.seed;
        record.repeat = spec.repeat;
        const auto start = std::chrono::steady_clock::now();
        try {
            RunResult run = run_algorithm(plan.algorithms[spec.algo_idx],
                                          problems[spec.problem_idx], plan.budget, spec.seed);
            record.evals_used = run.evals_used;
            record.front = run.archive.objectives();
        } catch (const std::exception& e) {
            record.failed = true;
            record.error = e.what();
        }
        if (timing) {
            const auto elapsed = std::chrono::steady_clock::now() - start;
            record.wall_ms =
                std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed)
                    .count();
        }
        result.records[i] = std::move(record);
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) execute(i);
    } else {
        std::atomic<std::size_t> cursor{0};
        const auto worker = [&] {
            for (std::size_t i = cursor.fetch_add(1); i < specs.size(); i = cursor.fetch_add(1))
                execute(i);
        };
        std::vector<std::thread> threads;
        const std::size_t n_threads =
            std::min<std::size_t>(static_cast<std::size_t>(jobs), specs.size());
        threads.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    // Reference front per problem from the union of all outcomes.
    for (std::size_t p = 0; p < problems.size(); ++p) {
        std::vector<std::vector<ObjectiveVector>> fronts;
        for (std::size_t i = 0; i < specs.size(); ++i)
            if (specs[i].problem_idx == p && !result.records[i].failed &&
                !result.records[i].front.empty())
                fronts.push_back(result.records[i].front);
        if (fronts.empty()) continue;
        const Front reference = build_reference_front(fronts);
        result.reference_fronts[plan.problems[p]] = reference.points();
        const ObjectiveBounds bounds = front_bounds(reference.points());
        for (std::size_t i = 0; i < specs.size(); ++i) {
            if (specs[i].problem_idx != p || result.records[i].failed) continue;
            auto& record = result.records[i];
            for (const auto& name : plan.indicators)
                record.indicator_values[name] = compute_indicator(
                    name, record.front, reference.points(), bounds, plan.hv_samples, record.seed);
        }
    }
    return result;
}

std::string records_to_csv(const ExperimentResult& result) {
    std::string out = "problem,algorithm,seed,repeat,evals_used,indicator,value,wall_ms\n";
    for (const auto& record : result.records) {
        if (record.failed) continue;
        for (const auto& [name, value] : record.indicator_values) {
            out += record.problem + "," + record.algorithm + "," + std::to_string(record.seed) +
                   "," + std::to_string(record.repeat) + "," + std::to_string(record.evals_used) +
                   "," + name + "," + format_double(value) + "," + format_double(record.wall_ms) +
                   "\n";
        }
    }
    return out;
}

SampleTable records_from_csv(const std::string& text) {
    SampleTable table;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != "problem,algorithm,seed,repeat,evals_used,indicator,value,wall_ms")
                throw parse_error("unexpected records CSV header", 1);
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != 8) throw parse_error("records row needs 8 cells", lineno);
        const double value = parse_double(cells[6], lineno);
        table[{cells[0], cells[5]}][cells[1]].push_back(value);
    }
    if (table.empty()) throw parse_error("records CSV has no data rows", lineno ? lineno : 1);
    return table;
}

// ---- statistics --------------------------------------------------------------------

double cliffs_delta(std::span<const double> xs, std::span<const double> ys) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("cliffs_delta: empty input");
    std::vector<double> sorted(ys.begin(), ys.end());
    std::sort(sorted.begin(), sorted.end());
    long long net = 0;
    for (const double x : xs) {
        const auto lower = std::lower_bound(sorted.begin(), sorted.end(), x);
        const auto upper = std::upper_bound(sorted.begin(), sorted.end(), x);
        const long long less = std::distance(sorted.begin(), lower);      // #{y < x}
        const long long greater = std::distance(upper, sorted.end());     // #{y > x}
        net += less - greater;
    }
    return static_cast<double>(net) /
           (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

bool bootstrap_different(std::span<const double> xs, std::span<const double> ys,
                         std::uint64_t seed, int n_boot, double alpha) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("bootstrap_different: empty input");
    if (n_boot < 100) throw std::invalid_argument("bootstrap_different: n_boot must be >= 100");
    const auto mean = [](std::span<const double> v) {
        double s = 0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    const double observed = std::abs(mean(xs) - mean(ys));

    std::vector<double> pooled(xs.begin(), xs.end());
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    const bool degenerate =
        std::all_of(pooled.begin(), pooled.end(), [&](double v) { return v == pooled[0]; });
    if (degenerate) return false;

    SeededRng rng(seed);
    std::vector<double> deltas(static_cast<std::size_t>(n_boot));
    for (auto& delta : deltas) {
        double sx = 0, sy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) sx += pooled[rng.pick(pooled.size())];
        for (std::size_t i = 0; i < ys.size(); ++i) sy += pooled[rng.pick(pooled.size())];
        delta = std::abs(sx / static_cast<double>(xs.size()) -
                         sy / static_cast<double>(ys.size()));
    }
    std::sort(deltas.begin(), deltas.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil((1.0 - alpha) * static_cast<double>(n_boot))) - 1;
    return observed > deltas[std::min(rank, deltas.size() - 1)];
}

double median_of(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    return n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double idx = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(idx));
    const auto hi = static_cast<std::size_t>(std::ceil(idx));
    const double frac = idx - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

}  // namespace

double iqr_of(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("iqr of empty sample");
    std::sort(samples.begin(), samples.end());
    return quantile_sorted(samples, 0.75) - quantile_sorted(samples, 0.25);
}

std::map<std::string, int> scott_knott(const std::map<std::string, std::vector<double>>& groups,
                                       std::uint64_t seed, const ScottKnottOptions& opts) {
    if (groups.empty()) throw std::invalid_argument("scott_knott: no groups");
    for (const auto& [name, samples] : groups)
        if (samples.size() < 2)
            throw std::invalid_argument("scott_knott: group '" + name + "' needs >= 2 samples");

    struct Entry {
        std::string name;
        const std::vector<double>* samples;
        double median;
    };
    std::vector<Entry> order;
    order.reserve(groups.size());
    for (const auto& [name, samples] : groups)
        order.push_back({name, &samples, median_of(samples)});
    std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
        return a.median != b.median ? a.median < b.median : a.name < b.name;
    });

    SeededRng rng(seed);
    std::map<std::string, int> ranks;

    const auto flatten = [&](std::size_t lo, std::size_t hi) {
        std::vector<double> all;
        for (std::size_t i = lo; i < hi; ++i)
            all.insert(all.end(), order[i].samples->begin(), order[i].samples->end());
        return all;
    };

    const std::function<int(std::size_t, std::size_t, int)> assign =
        [&](std::size_t lo, std::size_t hi, int rank) -> int {
        if (hi - lo == 1) {
            ranks[order[lo].name] = rank;
            return rank + 1;
        }
        // Split maximizing the between-group sum of squares.
        const std::vector<double> all = flatten(lo, hi);
        double mean_all = 0;
        for (double v : all) mean_all += v;
        mean_all /= static_cast<double>(all.size());

        double best_delta = -1.0;
        std::size_t best_split = lo + 1;
        for (std::size_t k = lo + 1; k < hi; ++k) {
            double sum_l = 0, n_l = 0, sum_r = 0, n_r = 0;
            for (std::size_t i = lo; i < k; ++i)
                for (double v : *order[i].samples) {
                    sum_l += v;
                    n_l += 1;
                }
            for (std::size_t i = k; i < hi; ++i)
                for (double v : *order[i].samples) {
                    sum_r += v;
                    n_r += 1;
                }
            const double mu_l = sum_l / n_l, mu_r = sum_r / n_r;
            const double delta = n_l * (mu_l - mean_all) * (mu_l - mean_all) +
                                 n_r * (mu_r - mean_all) * (mu_r - mean_all);
            if (delta > best_delta) {
                best_delta = delta;
                best_split = k;
            }
        }

        const std::vector<double> left = flatten(lo, best_split);
        const std::vector<double> right = flatten(best_split, hi);
        const std::uint64_t boot_seed = rng.next_u64();
        const bool split_ok =
            bootstrap_different(left, right, boot_seed, opts.n_boot, opts.alpha) &&
            std::abs(cliffs_delta(left, right)) >= opts.cliff_threshold;
        if (!split_ok) {
            for (std::size_t i = lo; i < hi; ++i) ranks[order[i].name] = rank;
            return rank + 1;
        }
        const int next = assign(lo, best_split, rank);
        return assign(best_split, hi, next);
    };
    assign(0, order.size(), 1);
    return ranks;
}

Reproducibility reproducibility(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("reproducibility: empty sample");
    Reproducibility out;
    const std::size_t n = samples.size();
    if (n < 2) return out;  // sample stddev needs n >= 2
    double mean = 0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double stddev = std::sqrt(ss / static_cast<double>(n - 1));
    if (mean == 0.0) return out;
    out.cv = stddev / mean;
    if (*out.cv != 0.0) out.reproducibility = 1.0 / *out.cv;
    return out;
}

// ---- ranking and reports --------------------------------------------------------------

RankingTable rank_samples(const SampleTable& samples, std::uint64_t seed,
                          const ScottKnottOptions& opts) {
    RankingTable table;
    for (const auto& [cell, groups] : samples) {
        // Scott-Knott ranks ascending; negate maximized indicators so
        // "better" still maps to rank 1.
        std::map<std::string, std::vector<double>> oriented;
        const bool flip = indicator_is_maximized(cell.second);
        for (const auto& [algo, values] : groups) {
            auto& v = oriented[algo];
            v = values;
            if (flip)
                for (auto& x : v) x = -x;
        }
        const auto ranks = scott_knott(oriented, seed, opts);
        std::vector<RankedCell> cells;
        cells.reserve(groups.size());
        for (const auto& [algo, values] : groups) {
            RankedCell rc;
            rc.algorithm = algo;
            rc.rank = ranks.at(algo);
            rc.median = median_of(values);
            rc.iqr = iqr_of(values);
            rc.n = static_cast<int>(values.size());
            cells.push_back(std::move(rc));
        }
        std::sort(cells.begin(), cells.end(), [](const RankedCell& a, const RankedCell& b) {
            return a.rank != b.rank ? a.rank < b.rank : a.algorithm < b.algorithm;
        });
        table[cell] = std::move(cells);
    }
    return table;
}

Report report(const RankingTable& rankings, std::span<const std::string> warnings) {
    Report out;
    out.csv = "problem,indicator,algorithm,rank,median,iqr,n\n";
    for (const auto& [cell, cells] : rankings)
        for (const auto& rc : cells)
            out.csv += cell.first + "," + cell.second + "," + rc.algorithm + "," +
                       std::to_string(rc.rank) + "," + format_double(rc.median) + "," +
                       format_double(rc.iqr) + "," + std::to_string(rc.n) + "\n";

    std::ostringstream text;
    for (const auto& w : warnings) text << "WARNING: " << w << "\n";
    if (!warnings.empty()) text << "\n";
    for (const auto& [cell, cells] : rankings) {
        text << "problem: " << cell.first << "   indicator: " << cell.second << "\n";
        std::size_t width = 9;
        for (const auto& rc : cells) width = std::max(width, rc.algorithm.size());
        text << "  rank  " << std::string(width - 9, ' ') << "algorithm"
             << "        median           iqr    n\n";
        for (const auto& rc : cells) {
            std::string med = format_double(rc.median);
            std::string iqr = format_double(rc.iqr);
            if (med.size() > 12) med = med.substr(0, 12);
            if (iqr.size() > 12) iqr = iqr.substr(0, 12);
            text << "  " << std::string(4 - std::to_string(rc.rank).size(), ' ') << rc.rank
                 << "  " << std::string(width - rc.algorithm.size(), ' ') << rc.algorithm << "  "
                 << std::string(12 - med.size(), ' ') << med << "  "
                 << std::string(12 - iqr.size(), ' ') << iqr << "  "
                 << std::string(std::max<std::size_t>(3, std::to_string(rc.n).size()) -
                                    std::to_string(rc.n).size(),
                                ' ')
                 << rc.n << "\n";
        }
        text << "\n";
    }
    out.text = text.str();
    return out;
}

// ---- tuning ------------------------------------------------------------------------

std::vector<TunableParameter> tunable_space(const std::string& algorithm) {
    const auto real_render = [](const Value& v) { return format_double(std::get<double>(v)); };
    const auto int_render = [](const Value& v) { return std::to_string(std::get<long long>(v)); };
    if (algorithm == "ga") {
        const auto even_render = [](const Value& v) {
            long long n = std::get<long long>(v);
            if (n % 2 != 0) ++n;  // pop_size must be even
            return std::to_string(n);
        };
        return {
            {"pop_size", IntegerKind{8, 200}, even_render},
            {"crossover_prob", ContinuousKind{0.0, 1.0}, real_render},
            {"mutation_prob", ContinuousKind{0.001, 1.0}, real_render},
            {"sbx_eta", ContinuousKind{2.0, 50.0}, real_render},
            {"pm_eta", ContinuousKind{2.0, 50.0}, real_render},
        };
    }
    if (algorithm == "de") {
        return {
            {"np", IntegerKind{4, 100}, int_render},
            {"f", ContinuousKind{0.1, 1.9}, real_render},
            {"cr", ContinuousKind{0.0, 1.0}, real_render},
        };
    }
    if (algorithm == "sa") {
        return {
            {"t0", ContinuousKind{0.01, 10.0}, real_render},
            {"alpha", ContinuousKind{0.8, 0.999}, real_render},
            {"neighbor_scale", ContinuousKind{0.01, 1.0}, real_render},
        };
    }
    if (algorithm == "flash") {
        return {
            {"init_samples", IntegerKind{5, 50}, int_render},
            {"min_leaf", IntegerKind{1, 16}, int_render},
        };
    }
    if (algorithm == "sway") {
        return {
            {"initial_size", IntegerKind{256, 20000}, int_render},
            {"enough", IntegerKind{8, 256}, int_render},
        };
    }
    throw std::invalid_argument("no tunable space declared for algorithm '" + algorithm + "'");
}

std::vector<std::pair<std::string, std::string>> default_tuned_params(
    const std::string& algorithm) {
    if (algorithm == "ga")
        return {{"pop_size", "100"}, {"crossover_prob", "0.9"}, {"mutation_prob", "-1"},
                {"sbx_eta", "20"},   {"pm_eta", "20"}};
    if (algorithm == "de") return {{"np", "0"}, {"f", "0.75"}, {"cr", "0.3"}};
    if (algorithm == "sa") return {{"t0", "1"}, {"alpha", "0.99"}, {"neighbor_scale", "0.1"}};
    if (algorithm == "flash") return {{"init_samples", "20"}, {"min_leaf", "4"}};
    if (algorithm == "sway") return {{"initial_size", "10000"}, {"enough", "100"}};
    throw std::invalid_argument("no tunable space declared for algorithm '" + algorithm + "'");
}

TuneResult tune(const std::string& target, const Problem& problem,
                std::span<const TunableParameter> space, int meta_budget, std::uint64_t seed,
                const TuneOptions& opts) {
    if (space.empty()) throw std::invalid_argument("tune: empty tunable space");
    if (opts.inner_repeats < 3) throw std::invalid_argument("tune: inner_repeats must be >= 3");
    if (std::find(known_indicators().begin(), known_indicators().end(), opts.indicator) ==
        known_indicators().end())
        throw std::invalid_argument("tune: unknown indicator '" + opts.indicator + "'");

    std::vector<DecisionDescriptor> descriptors;
    descriptors.reserve(space.size());
    for (const auto& p : space) descriptors.push_back({p.name, p.kind});
    const DecisionSpace meta_space(std::move(descriptors));

    const auto decode = [&](const Solution& s) {
        std::vector<std::pair<std::string, std::string>> params;
        params.reserve(space.size());
        for (std::size_t i = 0; i < space.size(); ++i)
            params.emplace_back(space[i].name, space[i].render(s.values[i]));
        return params;
    };

    // Fixed reference front: analytic when the problem knows one, otherwise
    // a frozen random-search pre-pass.
    std::vector<ObjectiveVector> reference;
    if (problem.true_front) {
        reference = problem.true_front(opts.reference_points);
    } else {
        std::vector<std::vector<ObjectiveVector>> fronts;
        for (int r = 0; r < opts.inner_repeats; ++r) {
            const RunResult pre =
                random_search(problem, opts.inner_budget, seed ^ (0xABCD0000ULL + r));
            fronts.push_back(pre.archive.objectives());
        }
        reference = build_reference_front(fronts).points();
    }
    const ObjectiveBounds bounds = front_bounds(reference);
    const bool maximize = indicator_is_maximized(opts.indicator);

    // Common random numbers: the same inner seeds for every candidate make
    // meta-evaluations directly comparable.
    std::vector<std::uint64_t> inner_seeds(static_cast<std::size_t>(opts.inner_repeats));
    for (std::size_t r = 0; r < inner_seeds.size(); ++r) inner_seeds[r] = seed + 1 + r;

    // Parameter vectors the target rejects (say, a population larger than
    // the inner budget) score a large finite penalty instead of killing the
    // search.
    constexpr double kInfeasible = 1e9;
    const auto evaluate_params =
        [&](const std::vector<std::pair<std::string, std::string>>& params) {
            AlgorithmSpec spec;
            spec.name = target;
            spec.label = target;
            spec.params = params;
            std::vector<double> scores;
            scores.reserve(inner_seeds.size());
            try {
                for (const std::uint64_t inner_seed : inner_seeds) {
                    const RunResult run =
                        run_algorithm(spec, problem, opts.inner_budget, inner_seed);
                    const double value =
                        compute_indicator(opts.indicator, run.archive.objectives(), reference,
                                          bounds, 20000, inner_seed);
                    scores.push_back(maximize ? -value : value);
                }
            } catch (const std::exception&) {
                return kInfeasible;
            }
            return median_of(std::move(scores));
        };

    Problem meta{
        "tune:" + target,
        meta_space,
        1,
        {Direction::minimize},
        {},
        nullptr,
        {},
    };
    meta.raw_evaluate = [&](const Solution& s) {
        return std::vector<double>{evaluate_params(decode(s))};
    };

    const RunResult meta_run = differential_evolution(meta, meta_budget, DeParams{}, seed);
    const EvaluatedSolution& best = meta_run.archive.members().front();

    TuneResult out;
    out.best_params = decode(best.solution);
    out.best_score = maximize ? -best.objectives[0] : best.objectives[0];
    out.meta_evals = meta_run.evals_used;
    if (opts.baseline) {
        const double baseline_score = evaluate_params(*opts.baseline);
        const double oriented_best = maximize ? -out.best_score : out.best_score;
        if (baseline_score < oriented_best) {
            out.best_params = *opts.baseline;
            out.best_score = maximize ? -baseline_score : baseline_score;
        }
    }
    return out;
}

}  // namespace dsekit
