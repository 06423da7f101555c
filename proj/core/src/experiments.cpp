#include "shsbm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "shsbm/errors.hpp"
#include "shsbm/parallel.hpp"
#include "shsbm/rng.hpp"

namespace shsbm {

namespace {

// Per-trial stream tags; each trial's seed is mix64(mix64(base) ^ (t+1)) and
// tag-derived streams stay disjoint within the trial.
constexpr std::uint64_t kTruthTag = 0x74727574;
constexpr std::uint64_t kLabelTag = 0x6c6162656c;

TrialResult run_trial(const Instance& instance, std::uint64_t trial_seed,
                      const std::optional<Hypothesis>& fixed_truth,
                      std::uint64_t class_cap) {
    const auto start = std::chrono::steady_clock::now();
    const ModelConfig& config = instance.config;

    Hypothesis truth;
    if (fixed_truth) {
        truth = *fixed_truth;
    } else {
        Rng truth_rng(mix64(trial_seed ^ kTruthTag));
        truth = random_hypothesis(config.n, config.r, config.k, truth_rng);
    }

    const WeightTensor weights =
        sample_weights(config, truth, instance.dist_in, instance.dist_out, trial_seed);
    const Sense sense = config.q > config.p ? Sense::minimize : Sense::maximize;
    const auto [result, margin] = solve_with_margin(weights, truth, sense, 1, class_cap);

    TrialResult trial;
    trial.score_margin = margin;
    trial.success = margin > 0.0;
    if (trial.success != recovery_success(result, truth)) {
        fail("internal_error", "margin sign disagrees with strict-dominance recovery");
    }

    if (!trial.success) {
        trial.labeled_success = false;
    } else if (config.r == 1) {
        trial.labeled_success = true;
    } else {
        // The solver pins down the class only; labels are a uniform guess.
        Rng label_rng(mix64(trial_seed ^ kLabelTag));
        std::vector<int> perm(config.r);
        for (int i = 0; i < config.r; ++i) perm[i] = i;
        for (int i = config.r - 1; i > 0; --i) {
            const int j = static_cast<int>(label_rng.uniform_below(
                static_cast<std::uint64_t>(i) + 1));
            std::swap(perm[i], perm[j]);
        }
        const Hypothesis& recovered = result.argmax_classes.front();
        trial.labeled_success = true;
        for (int v = 0; v < config.n; ++v) {
            const int label = recovered.labels[v];
            const int guess = label == config.r ? config.r : perm[label];
            if (guess != truth.labels[v]) {
                trial.labeled_success = false;
                break;
            }
        }
    }

    trial.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return trial;
}

}  // namespace

BatchResult run_batch(const Instance& instance, std::uint64_t trials, std::uint64_t base_seed,
                      const BatchOptions& options) {
    instance.validate();
    if (trials < 1) fail("invalid_argument", "trials must be >= 1");
    if (options.jobs < 1) fail("invalid_argument", "jobs must be >= 1");
    if (options.fixed_truth) {
        options.fixed_truth->validate();
        if (options.fixed_truth->n() != instance.config.n ||
            options.fixed_truth->r != instance.config.r ||
            options.fixed_truth->k != instance.config.k) {
            fail("shape_mismatch", "fixed truth does not match the config");
        }
    }
    // Surface guard violations before spawning workers.
    ClassEnumerator(instance.config.n, instance.config.r, instance.config.k)
        .size_checked(options.class_cap);

    std::vector<TrialResult> results(trials);
    const std::uint64_t mixed = mix64(base_seed);
    run_chunked(0, trials, options.jobs,
                [&](std::uint64_t begin, std::uint64_t end, int) {
                    for (std::uint64_t t = begin; t < end; ++t) {
                        results[t] = run_trial(instance, mix64(mixed ^ (t + 1)),
                                               options.fixed_truth, options.class_cap);
                    }
                });

    BatchResult batch;
    batch.trials = trials;
    for (const TrialResult& trial : results) {
        batch.successes += trial.success ? 1 : 0;
        batch.labeled_successes += trial.labeled_success ? 1 : 0;
    }
    batch.rate = static_cast<double>(batch.successes) / static_cast<double>(trials);
    batch.wilson = wilson_interval(batch.successes, trials);
    if (options.keep_per_trial) batch.per_trial = std::move(results);
    return batch;
}

std::vector<SweepRow> sweep(const std::vector<Instance>& grid, std::uint64_t trials,
                            std::uint64_t base_seed, int jobs,
                            const ThresholdParams& params) {
    if (grid.empty()) fail("invalid_argument", "sweep needs at least one grid point");
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    const std::uint64_t mixed = mix64(base_seed);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Instance& instance = grid[i];
        BatchOptions options;
        options.jobs = jobs;
        const BatchResult batch =
            run_batch(instance, trials, mix64(mixed ^ (i + 1)), options);
        SweepRow row;
        row.instance = instance;
        row.trials = batch.trials;
        row.successes = batch.successes;
        row.rate = batch.rate;
        row.wilson = batch.wilson;
        row.threshold =
            classify(instance.config, params,
                     std::make_pair(instance.dist_in.sub_gaussian_sq,
                                    instance.dist_out.sub_gaussian_sq));
        rows.push_back(std::move(row));
    }
    return rows;
}

FanoReport fano_experiment(const Instance& instance, std::uint64_t trials,
                           std::uint64_t base_seed, int jobs) {
    instance.validate();
    if (instance.config.r != 1) {
        fail("invalid_config", "the error-floor comparison requires r = 1");
    }
    if (instance.dist_in.family != Family::bernoulli ||
        instance.dist_out.family != Family::bernoulli) {
        fail("unsupported_divergence", "the error-floor comparison requires Bernoulli weights");
    }

    BatchOptions options;
    options.jobs = jobs;
    const BatchResult batch = run_batch(instance, trials, base_seed, options);

    FanoReport report;
    report.trials = trials;
    report.failures = trials - batch.labeled_successes;
    report.empirical_error =
        static_cast<double>(report.failures) / static_cast<double>(trials);
    report.error_interval = wilson_interval(report.failures, trials);
    report.floor_value = fano_floor(instance.config);
    report.margin =
        3.0 * (report.error_interval.high - report.error_interval.low) / 2.0;
    report.pass = report.error_interval.low >= report.floor_value - report.margin;
    return report;
}

}  // namespace shsbm
