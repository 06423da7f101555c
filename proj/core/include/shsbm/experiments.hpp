#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shsbm/mle.hpp"
#include "shsbm/model.hpp"
#include "shsbm/stats.hpp"
#include "shsbm/thresholds.hpp"

namespace shsbm {

struct TrialResult {
    bool success = false;          // tensor-class strict dominance
    bool labeled_success = false;  // success plus a correct uniform relabel draw
    double score_margin = 0.0;     // truth-class score minus best competing score
    double elapsed_seconds = 0.0;
};

struct BatchResult {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t labeled_successes = 0;
    double rate = 0.0;
    WilsonInterval wilson;               // 95% interval on the class-level rate
    std::vector<TrialResult> per_trial;  // filled only when requested
};

struct BatchOptions {
    int jobs = 1;
    std::optional<Hypothesis> fixed_truth;  // default: fresh uniform truth per trial
    bool keep_per_trial = false;
    std::uint64_t class_cap = kDefaultClassCap;
};

// Monte Carlo recovery batch.  Per trial: draw a uniform labeled truth (unless
// fixed), sample the weight tensor, solve exactly, record strict-dominance
// success and the score margin.  Outcomes are a pure function of (instance,
// trials, base_seed, fixed_truth) — jobs never changes them.
BatchResult run_batch(const Instance& instance, std::uint64_t trials, std::uint64_t base_seed,
                      const BatchOptions& options = {});

struct SweepRow {
    Instance instance;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double rate = 0.0;
    WilsonInterval wilson;
    ThresholdReport threshold;
};

// One batch per grid point joined with its threshold report.  Point i's batch
// runs with base seed mix64(mix64(base_seed) ^ (i+1)).
std::vector<SweepRow> sweep(const std::vector<Instance>& grid, std::uint64_t trials,
                            std::uint64_t base_seed, int jobs, const ThresholdParams& params);

struct FanoReport {
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;    // labeled-recovery failures
    double empirical_error = 0.0;  // failures / trials
    WilsonInterval error_interval;
    double floor_value = 0.0;  // information-theoretic error floor
    double margin = 0.0;       // 3 Wilson half-widths
    bool pass = false;         // error_interval.low >= floor_value - margin
};

// Compares the MLE's labeled error rate under the uniform prior against the
// error floor.  Requires r = 1 (labeled and class recovery coincide) and
// Bernoulli weights.
FanoReport fano_experiment(const Instance& instance, std::uint64_t trials,
                           std::uint64_t base_seed, int jobs = 1);

}  // namespace shsbm
