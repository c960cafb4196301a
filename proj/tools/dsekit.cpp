// dsekit command line: list problems, run experiment plans, compute quality
// indicators on front files, rank results, tune algorithm parameters.
//
// Exit codes: 0 success, 2 usage/input error, 1 internal error.

#include <CLI11.hpp>
#include <chrono>
#include <climits>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "dsekit/csv.hpp"
#include "dsekit/feature_model.hpp"
#include "dsekit/harness.hpp"

namespace fs = std::filesystem;
using namespace dsekit;

namespace {

std::uint64_t env_or(std::uint64_t fallback) {
    // DSEKIT_SEED overrides plan/base seeds; an explicit --seed flag wins
    // over the environment.
    if (const char* env = std::getenv("DSEKIT_SEED")) {
        try {
            return static_cast<std::uint64_t>(std::stoull(env));
        } catch (...) {
            throw std::invalid_argument("DSEKIT_SEED is not an integer: " + std::string(env));
        }
    }
    return fallback;
}

int cmd_problems(const std::vector<std::string>& tabular_files,
                 const std::vector<std::string>& spl_files) {
    std::cout << "name,decisions,objectives,source\n";
    std::cout << "zdt1 n=N,continuous^N,2,builtin\n";
    std::cout << "zdt3 n=N,continuous^N,2,builtin\n";
    std::cout << "dtlz2 n=N m=M,continuous^N,M,builtin\n";
    std::cout << "sphere n=N,continuous^N,1,builtin\n";
    std::cout << "spl:<model-file>,boolean^features,5,file\n";
    std::cout << "tabular:<csv-file> m=M,from header,M,file\n";
    for (const auto& path : spl_files) {
        const FeatureModel model = parse_feature_model(read_text_file(path));
        std::cout << "spl:" << path << ",boolean^" << model.feature_count() << ",5,file\n";
    }
    for (const auto& path : tabular_files) {
        const Problem p = resolve_problem("tabular:" + path);
        std::cout << "tabular:" << path << "," << p.space.size() << " decisions,"
                  << p.num_objectives << ",file (" << p.pool->size() << " rows)\n";
    }
    return 0;
}

int cmd_run(const std::string& plan_path, const std::string& out_dir, int jobs, bool timing,
            bool seed_given, std::uint64_t seed_flag) {
    const std::string plan_text = read_text_file(plan_path);
    ExperimentPlan plan = parse_plan(plan_text);
    plan.base_seed = seed_given ? seed_flag : env_or(plan.base_seed);

    const std::string base_dir = fs::path(plan_path).parent_path().string();
    fs::create_directories(out_dir);

    const auto started = std::chrono::steady_clock::now();
    const ExperimentResult result = run_experiment(plan, base_dir.empty() ? "." : base_dir, jobs,
                                                   timing);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    // Problems with generated attributes get them persisted next to the
    // results, so the exact experiment can be replayed from files alone.
    for (const auto& spec : plan.problems) {
        if (spec.rfind("spl:", 0) != 0 || spec.find("attrs=") != std::string::npos) continue;
        std::istringstream ss(spec);
        std::string head;
        ss >> head;
        const std::string model_path =
            (fs::path(base_dir.empty() ? "." : base_dir) / head.substr(4)).string();
        const FeatureModel model = parse_feature_model(read_text_file(model_path));
        SeededRng rng(plan.base_seed);
        const ProductAttributes attrs = generate_attributes(model, rng);
        const std::string name = fs::path(head.substr(4)).stem().string() + "_attrs.csv";
        write_text_file_atomic((fs::path(out_dir) / name).string(),
                               attributes_to_csv(model, attrs));
    }

    const std::string records_csv = records_to_csv(result);
    write_text_file_atomic((fs::path(out_dir) / "records.csv").string(), records_csv);

    const SampleTable samples = records_from_csv(records_csv);
    const RankingTable rankings = rank_samples(samples, plan.base_seed);
    const Report rep = report(rankings, result.warnings);
    write_text_file_atomic((fs::path(out_dir) / "report.csv").string(), rep.csv);
    write_text_file_atomic((fs::path(out_dir) / "report.txt").string(), rep.text);

    // Manifest: full plan echo, per-run seeds and failures, total duration.
    std::string manifest = "# dsekit run manifest\nplan_file " + plan_path + "\n";
    manifest += "effective_base_seed " + std::to_string(plan.base_seed) + "\n";
    manifest += "jobs " + std::to_string(jobs) + "\n";
    manifest += "total_wall_ms " + std::to_string(elapsed) + "\n\n";
    manifest += "# plan\n" + serialize_plan(plan) + "\n# runs\n";
    int failures = 0;
    for (const auto& record : result.records) {
        manifest += record.problem + " | " + record.algorithm + " | repeat " +
                    std::to_string(record.repeat) + " | seed " + std::to_string(record.seed);
        if (record.failed) {
            manifest += " | FAILED: " + record.error;
            ++failures;
        } else {
            manifest += " | evals " + std::to_string(record.evals_used);
        }
        manifest += "\n";
    }
    for (const auto& warning : result.warnings) manifest += "warning: " + warning + "\n";
    write_text_file_atomic((fs::path(out_dir) / "manifest.txt").string(), manifest);

    std::cout << "wrote " << out_dir << "/records.csv, report.csv, report.txt, manifest.txt ("
              << result.records.size() << " runs, " << failures << " failed)\n";
    if (failures == static_cast<int>(result.records.size())) {
        std::cerr << "every run failed\n";
        return 1;
    }
    return 0;
}

int cmd_indicators(const std::string& predicted_path, const std::string& actual_path,
                   const std::string& metrics_arg, const std::string& ref_arg,
                   std::size_t samples, bool no_normalize, std::uint64_t seed) {
    const auto predicted_raw = read_front_file(predicted_path);
    const auto actual_raw = read_front_file(actual_path);
    if (predicted_raw[0].arity() != actual_raw[0].arity())
        throw std::invalid_argument("front arity mismatch between predicted and actual");
    const std::size_t m = predicted_raw[0].arity();

    std::vector<std::string> metrics;
    {
        std::string cur;
        for (char c : metrics_arg + ",") {
            if (c == ',') {
                if (!cur.empty()) metrics.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
    }
    for (const auto& name : metrics)
        if (std::find(known_indicators().begin(), known_indicators().end(), name) ==
            known_indicators().end())
            throw std::invalid_argument("unknown metric '" + name + "'");

    // Normalization against the actual front's bounds, unless disabled.
    std::vector<ObjectiveVector> predicted = predicted_raw, actual = actual_raw;
    if (!no_normalize) {
        const ObjectiveBounds bounds = front_bounds(actual_raw);
        predicted = normalize_front(predicted_raw, bounds);
        actual = normalize_front(actual_raw, bounds);
    }

    const bool wants_hv = std::find(metrics.begin(), metrics.end(), "hv") != metrics.end();
    ReferencePoint ref{{}};
    if (!ref_arg.empty()) {
        std::string cur;
        for (char c : ref_arg + ",") {
            if (c == ',') {
                ref.values.push_back(parse_double(cur, 0));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (ref.values.size() != m)
            throw std::invalid_argument("--ref needs " + std::to_string(m) + " values");
    } else if (wants_hv) {
        if (no_normalize)
            throw std::invalid_argument("--no-normalize requires an explicit --ref for hv");
        ref = default_reference_point(m);
    }

    const Front p_front(predicted, false);
    const Front a_front(actual, false);
    for (const auto& name : metrics) {
        double value = 0.0;
        bool exact = true;
        if (name == "gd") value = generational_distance(p_front, a_front);
        else if (name == "igd") value = inverted_generational_distance(a_front, p_front);
        else if (name == "spread") value = spread(p_front).value;
        else if (name == "approx") value = additive_approximation(a_front, p_front);
        else {
            // Points outside the reference box contribute no volume.
            std::vector<ObjectiveVector> inside;
            for (const auto& pt : predicted) {
                bool ok = true;
                for (std::size_t i = 0; i < m; ++i)
                    if (pt[i] > ref.values[i]) ok = false;
                if (ok) inside.push_back(pt);
            }
            if (inside.empty()) {
                value = 0.0;
                exact = m <= 3;
            } else {
                SeededRng rng(seed);
                const auto hv = hypervolume(Front(inside, false), ref, samples, rng);
                value = hv.value;
                exact = hv.exact;
            }
        }
        std::cout << name << "," << format_double(value) << "," << (exact ? "exact" : "estimated")
                  << "\n";
    }
    return 0;
}

int cmd_rank(const std::string& records_path, const std::string& out_dir, std::uint64_t seed) {
    const SampleTable samples = records_from_csv(read_text_file(records_path));
    std::vector<std::string> warnings;
    int n_min = INT_MAX;
    for (const auto& [cell, groups] : samples)
        for (const auto& [algo, values] : groups)
            n_min = std::min(n_min, static_cast<int>(values.size()));
    if (n_min < 30)
        warnings.push_back("repeats=" + std::to_string(n_min) +
                           " is below the recommended 30; rankings are indicative only");
    const RankingTable rankings = rank_samples(samples, seed);
    const Report rep = report(rankings, warnings);
    fs::create_directories(out_dir);
    write_text_file_atomic((fs::path(out_dir) / "report.csv").string(), rep.csv);
    write_text_file_atomic((fs::path(out_dir) / "report.txt").string(), rep.text);
    std::cout << rep.text;
    return 0;
}

int cmd_tune(const std::string& target, const std::string& problem_spec, int meta_budget,
             std::uint64_t seed, int inner_repeats, int inner_budget,
             const std::string& indicator, const std::string& out_file) {
    const Problem problem = resolve_problem(problem_spec, ".", seed);
    const auto space = tunable_space(target);
    TuneOptions opts;
    opts.inner_repeats = inner_repeats;
    opts.inner_budget = inner_budget;
    opts.indicator = indicator;
    // Default parameters as the baseline: the emitted block is never worse
    // than running the target untuned on the same seeds.
    opts.baseline = default_tuned_params(target);
    const TuneResult result = tune(target, problem, space, meta_budget, seed, opts);

    // Plan-fragment syntax, ready to paste into an experiment plan.
    std::string fragment = "algorithm " + target;
    for (const auto& [k, v] : result.best_params) fragment += " " + k + "=" + v;
    fragment += "\n";
    std::string out = "# tuned on: " + problem_spec + "\n";
    out += "# " + indicator + " (median of " + std::to_string(inner_repeats) +
           " runs at budget " + std::to_string(inner_budget) +
           "): " + format_double(result.best_score) + "\n";
    out += fragment;
    if (!out_file.empty()) write_text_file_atomic(out_file, out);
    std::cout << out;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dsekit: data-driven search-based software engineering toolkit"};
    app.require_subcommand(1);

    auto* problems_cmd = app.add_subcommand("problems", "list registered problems");
    std::vector<std::string> tabular_files, spl_files;
    problems_cmd->add_option("--tabular", tabular_files, "tabular CSV files to include");
    problems_cmd->add_option("--spl", spl_files, "feature-model files to include");

    auto* run_cmd = app.add_subcommand("run", "execute an experiment plan");
    std::string plan_path, out_dir = "dsekit_out";
    int jobs = 1;
    bool timing = false;
    std::uint64_t seed_flag = 0;
    run_cmd->add_option("--plan", plan_path, "plan file")->required();
    run_cmd->add_option("--jobs", jobs, "parallel runs");
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_flag("--timing", timing,
                      "record wall-clock times (off by default so outputs are byte-identical)");
    auto* run_seed = run_cmd->add_option("--seed", seed_flag, "override the plan base seed");

    auto* ind_cmd = app.add_subcommand("indicators", "compute quality indicators on front CSVs");
    std::string predicted_path, actual_path, metrics = "gd,igd,spread,hv,approx", ref_arg;
    std::size_t samples = 100000;
    bool no_normalize = false;
    std::uint64_t ind_seed = 1;
    ind_cmd->add_option("--predicted", predicted_path, "predicted front CSV")->required();
    ind_cmd->add_option("--actual", actual_path, "actual/reference front CSV")->required();
    ind_cmd->add_option("--metrics", metrics, "comma list: gd,igd,spread,hv,approx");
    ind_cmd->add_option("--ref", ref_arg, "hypervolume reference point, comma separated");
    ind_cmd->add_option("--samples", samples, "Monte Carlo samples for m >= 4");
    ind_cmd->add_flag("--no-normalize", no_normalize, "skip normalization to the actual bounds");
    ind_cmd->add_option("--seed", ind_seed, "Monte Carlo seed");

    auto* rank_cmd = app.add_subcommand("rank", "Scott-Knott ranking of a records CSV");
    std::string records_path, rank_out = "dsekit_out";
    std::uint64_t rank_seed = 1;
    rank_cmd->add_option("--records", records_path, "records CSV")->required();
    rank_cmd->add_option("--out", rank_out, "output directory");
    auto* rank_seed_opt = rank_cmd->add_option("--seed", rank_seed, "bootstrap seed");

    auto* tune_cmd = app.add_subcommand("tune", "meta-tune an algorithm's parameters");
    std::string target, tune_problem, tune_indicator = "igd", tune_out;
    int meta_budget = 40, inner_repeats = 5, inner_budget = 500;
    std::uint64_t tune_seed = 1;
    tune_cmd->add_option("--target", target, "algorithm name")->required();
    tune_cmd->add_option("--problem", tune_problem, "problem spec, e.g. 'zdt1 n=10'")->required();
    tune_cmd->add_option("--meta-budget", meta_budget, "meta evaluations")->required();
    auto* tune_seed_opt = tune_cmd->add_option("--seed", tune_seed, "tuning seed");
    tune_cmd->add_option("--inner-repeats", inner_repeats, "runs per meta evaluation");
    tune_cmd->add_option("--inner-budget", inner_budget, "evaluations per inner run");
    tune_cmd->add_option("--indicator", tune_indicator, "meta objective indicator");
    tune_cmd->add_option("--out", tune_out, "write the parameter block here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (problems_cmd->parsed()) return cmd_problems(tabular_files, spl_files);
        if (run_cmd->parsed())
            return cmd_run(plan_path, out_dir, jobs, timing, !run_seed->empty(), seed_flag);
        if (ind_cmd->parsed())
            return cmd_indicators(predicted_path, actual_path, metrics, ref_arg, samples,
                                  no_normalize, ind_seed);
        if (rank_cmd->parsed())
            return cmd_rank(records_path, rank_out,
                            rank_seed_opt->empty() ? env_or(rank_seed) : rank_seed);
        if (tune_cmd->parsed())
            return cmd_tune(target, tune_problem, meta_budget,
                            tune_seed_opt->empty() ? env_or(tune_seed) : tune_seed, inner_repeats,
                            inner_budget, tune_indicator, tune_out);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
