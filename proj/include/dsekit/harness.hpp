#pragma once

// The experiment harness: plans of problems x algorithms x seeds, repeats
// with pairwise-distinct seeds, indicator computation against the union
// reference front, Scott-Knott ranking gated by bootstrap significance and
// Cliff's delta effect size, reproducibility metrics, and DE-based
// meta-tuning of algorithm parameters.
//
// Results are skew-friendly by construction: reports carry medians and
// IQRs, never bare means, and the ranking stack is non-parametric.

#include <map>

#include "dsekit/indicators.hpp"
#include "dsekit/optimizers.hpp"

namespace dsekit {

// ---- plans ------------------------------------------------------------------

struct AlgorithmSpec {
    std::string name;                                       // registered algorithm
    std::vector<std::pair<std::string, std::string>> params;  // key=value, order kept
    std::string label;                                      // unique display name
};

struct ExperimentPlan {
    std::vector<std::string> problems;  // problem spec strings, e.g. "zdt1 n=30"
    std::vector<AlgorithmSpec> algorithms;
    int repeats = 30;
    int budget = 1000;
    std::uint64_t base_seed = 1;
    std::vector<std::string> indicators;  // subset of gd, igd, spread, hv, approx
    std::size_t hv_samples = 100000;      // Monte Carlo samples when m >= 4
};

// Plan file: one statement per line, `#` comments.
//   problem <spec...>    algorithm <name> [k=v ...]   repeats <n>
//   budget <n>           base_seed <n>                indicators a,b,c
ExperimentPlan parse_plan(const std::string& text);
std::string serialize_plan(const ExperimentPlan& plan);

const std::vector<std::string>& known_indicators();
// True for indicators where larger values are better (hv).
bool indicator_is_maximized(const std::string& name);

// ---- running ------------------------------------------------------------------

struct RunRecord {
    std::string problem;
    std::string algorithm;
    std::uint64_t seed = 0;
    int repeat = 0;
    int evals_used = 0;
    std::vector<ObjectiveVector> front;
    double wall_ms = 0.0;
    std::map<std::string, double> indicator_values;
    bool failed = false;
    std::string error;
};

struct ExperimentResult {
    std::vector<RunRecord> records;
    std::map<std::string, std::vector<ObjectiveVector>> reference_fronts;  // per problem
    std::vector<std::string> warnings;  // e.g. the repeats < 30 stamp
};

// Problem spec strings -> Problem. Builtins: zdt1, zdt3, dtlz2, sphere,
// spl:<model-file>, tabular:<csv-file>; "key=value" tokens set parameters.
// Relative paths resolve against base_dir.
Problem resolve_problem(const std::string& spec, const std::string& base_dir = ".",
                        std::uint64_t attr_seed = 1);

// AlgorithmSpec -> one optimizer run.
RunResult run_algorithm(const AlgorithmSpec& algo, const Problem& problem, int budget,
                        std::uint64_t seed);

// Executes every (problem, algorithm, repeat) with its own derived seed
// (base_seed + global run index, checked pairwise distinct). A failing run
// is recorded and skipped, never aborts the plan. With timing false the
// wall_ms column stays 0 so outputs are byte-identical across re-runs.
ExperimentResult run_experiment(const ExperimentPlan& plan, const std::string& base_dir = ".",
                                int jobs = 1, bool timing = false);

// Records CSV: problem,algorithm,seed,repeat,evals_used,indicator,value,wall_ms
std::string records_to_csv(const ExperimentResult& result);
// A parsed records file: (problem, indicator) -> algorithm -> samples.
using SampleTable =
    std::map<std::pair<std::string, std::string>, std::map<std::string, std::vector<double>>>;
SampleTable records_from_csv(const std::string& text);

// ---- statistics ------------------------------------------------------------------

// (#{x > y} - #{x < y}) / (|xs| * |ys|), in [-1, 1].
double cliffs_delta(std::span<const double> xs, std::span<const double> ys);

// Two-sided bootstrap test on the difference of means under the pooled
// null; true iff |observed| exceeds the (1 - alpha) quantile of the
// resampled statistic. Deterministic per seed.
bool bootstrap_different(std::span<const double> xs, std::span<const double> ys,
                         std::uint64_t seed, int n_boot = 512, double alpha = 0.05);

struct ScottKnottOptions {
    int n_boot = 512;
    double alpha = 0.05;
    double cliff_threshold = 0.147;  // conventional "small" effect
};

// Recursive cluster-then-split ranking. Groups are sorted by median; the
// split maximizing the between-group sum of squares is accepted only when
// the two sides differ by both the bootstrap test AND |Cliff's delta| >=
// the threshold. Ranks are contiguous from 1; lower rank = smaller median.
std::map<std::string, int> scott_knott(const std::map<std::string, std::vector<double>>& groups,
                                       std::uint64_t seed, const ScottKnottOptions& opts = {});

struct Reproducibility {
    std::optional<double> cv;               // stddev/mean (n-1 denominator)
    std::optional<double> reproducibility;  // 1/cv
};

// Undefined cases (mean 0, single sample, cv 0) are absent markers, never NaN.
Reproducibility reproducibility(std::span<const double> samples);

double median_of(std::vector<double> samples);
double iqr_of(std::vector<double> samples);

// ---- ranking and reports ------------------------------------------------------------

struct RankedCell {
    std::string algorithm;
    int rank = 0;
    double median = 0.0;
    double iqr = 0.0;
    int n = 0;
};

// (problem, indicator) -> cells sorted by rank then algorithm name.
using RankingTable = std::map<std::pair<std::string, std::string>, std::vector<RankedCell>>;

RankingTable rank_samples(const SampleTable& samples, std::uint64_t seed,
                          const ScottKnottOptions& opts = {});

struct Report {
    std::string csv;   // problem,indicator,algorithm,rank,median,iqr,n
    std::string text;  // aligned human-readable tables
};

Report report(const RankingTable& rankings, std::span<const std::string> warnings);

// ---- tuning -----------------------------------------------------------------------

struct TunableParameter {
    std::string name;
    DecisionKind kind;
    // Renders a sampled value into the algorithm's k=v parameter string.
    std::function<std::string(const Value&)> render;
};

struct TuneOptions {
    int inner_repeats = 5;
    int inner_budget = 500;
    std::string indicator = "igd";
    std::size_t reference_points = 1000;  // analytic-front sample size
    // Evaluated alongside the search when set; the result is never worse
    // than this configuration on the tuning seeds. An engaged empty list
    // means the target's default parameters.
    std::optional<std::vector<std::pair<std::string, std::string>>> baseline;
};

struct TuneResult {
    std::vector<std::pair<std::string, std::string>> best_params;
    double best_score = 0.0;
    int meta_evals = 0;
};

// Tunable parameter declarations for the built-in algorithms.
std::vector<TunableParameter> tunable_space(const std::string& algorithm);

// The default values of those parameters, as explicit k=v pairs (the usual
// tuning baseline).
std::vector<std::pair<std::string, std::string>> default_tuned_params(
    const std::string& algorithm);

// Differential evolution over the parameter space. Each meta-evaluation is
// the median of the chosen indicator over inner_repeats seeded runs of the
// target, measured against a fixed reference front (the problem's analytic
// front when known, otherwise a frozen random-search pre-pass).
TuneResult tune(const std::string& target, const Problem& problem,
                std::span<const TunableParameter> space, int meta_budget, std::uint64_t seed,
                const TuneOptions& opts = {});

}  // namespace dsekit
