#include <benchmark/benchmark.h>

#include "shsbm/enumeration.hpp"
#include "shsbm/experiments.hpp"
#include "shsbm/mle.hpp"
#include "shsbm/model.hpp"
#include "shsbm/oracles.hpp"
#include "shsbm/thresholds.hpp"

namespace {

shsbm::Instance medium_instance() {
    return shsbm::Instance::bernoulli({12, 2, 4, 3, 0.8, 0.2});
}

void BM_SampleWeights(benchmark::State& state) {
    const shsbm::Instance instance = medium_instance();
    shsbm::ClassEnumerator classes(12, 2, 4);
    const shsbm::Hypothesis truth = classes.at(0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto tensor = shsbm::sample_weights(instance.config, truth, instance.dist_in,
                                            instance.dist_out, seed++);
        benchmark::DoNotOptimize(tensor.values.data());
    }
}
BENCHMARK(BM_SampleWeights);

void BM_ClassUnrank(benchmark::State& state) {
    shsbm::ClassEnumerator classes(14, 2, 4);
    const std::uint64_t total = classes.size_checked();
    std::uint64_t index = 0;
    for (auto _ : state) {
        auto y = classes.at(index);
        benchmark::DoNotOptimize(y.labels.data());
        index = (index + 9973) % total;
    }
}
BENCHMARK(BM_ClassUnrank);

void BM_Disagreement(benchmark::State& state) {
    shsbm::ClassEnumerator classes(12, 2, 4);
    const shsbm::Hypothesis a = classes.at(0);
    const shsbm::Hypothesis b = classes.at(classes.size_checked() - 1);
    for (auto _ : state) {
        auto stats = shsbm::disagreement(a, b, 3);
        benchmark::DoNotOptimize(stats.d);
    }
}
BENCHMARK(BM_Disagreement);

void BM_SolveExact(benchmark::State& state) {
    const int jobs = static_cast<int>(state.range(0));
    const shsbm::Instance instance = medium_instance();
    shsbm::ClassEnumerator classes(12, 2, 4);
    const shsbm::Hypothesis truth = classes.at(0);
    const auto weights = shsbm::sample_weights(instance.config, truth, instance.dist_in,
                                               instance.dist_out, 7);
    for (auto _ : state) {
        auto result = shsbm::solve(weights, 2, 4, shsbm::Sense::maximize, jobs);
        benchmark::DoNotOptimize(result.best_score);
    }
}
BENCHMARK(BM_SolveExact)->Arg(1)->Arg(4);

void BM_RunBatchTrial(benchmark::State& state) {
    const shsbm::Instance instance = shsbm::Instance::bernoulli({8, 1, 4, 2, 0.9, 0.1});
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto batch = shsbm::run_batch(instance, 1, seed++);
        benchmark::DoNotOptimize(batch.successes);
    }
}
BENCHMARK(BM_RunBatchTrial);

void BM_ExactMI(benchmark::State& state) {
    const shsbm::ModelConfig config{6, 1, 3, 2, 0.8, 0.3};
    for (auto _ : state) {
        auto result = shsbm::exact_mi(config);
        benchmark::DoNotOptimize(result.exact_mi);
    }
}
BENCHMARK(BM_ExactMI);

void BM_Classify(benchmark::State& state) {
    const shsbm::ModelConfig config{64, 2, 8, 3, 0.7, 0.2};
    const shsbm::ThresholdParams params;
    for (auto _ : state) {
        auto report = shsbm::classify(config, params);
        benchmark::DoNotOptimize(report.lower_rhs);
    }
}
BENCHMARK(BM_Classify);

}  // namespace

BENCHMARK_MAIN();
