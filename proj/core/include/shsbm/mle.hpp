#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "shsbm/enumeration.hpp"
#include "shsbm/model.hpp"

namespace shsbm {

enum class Sense { maximize, minimize };

struct MleResult {
    double best_score = 0.0;
    std::vector<Hypothesis> argmax_classes;  // canonical, ascending class index
    bool unique = false;
    std::uint64_t classes_evaluated = 0;
};

// Sum of tensor entries over y's within-community m-subsets (r*C(k,m) terms).
double score(const WeightTensor& weights, const Hypothesis& y);

// Exact optimum over all tensor classes.  Ties are detected by exact score
// equality; argmax_classes lists every optimal class.  Output is independent
// of jobs and chunking.
MleResult solve(const WeightTensor& weights, int r, int k, Sense sense = Sense::maximize,
                int jobs = 1, std::uint64_t class_cap = kDefaultClassCap);

// Strict dominance: true iff the optimum is unique and matches y_star's class.
bool recovery_success(const MleResult& result, const Hypothesis& y_star);

// Optimum plus the reference class's margin over the best competing class
// (direction-adjusted, so margin > 0 iff the reference strictly dominates
// every other class and recovery succeeds).
std::pair<MleResult, double> solve_with_margin(const WeightTensor& weights,
                                               const Hypothesis& reference, Sense sense,
                                               int jobs = 1,
                                               std::uint64_t class_cap = kDefaultClassCap);

struct NoiseSignalDecomposition {
    double noise = 0.0;   // <A - E[A], Y - Y*>
    double signal = 0.0;  // <E[A], Y - Y*> = -(p-q) d(Y)
};

NoiseSignalDecomposition decompose(const WeightTensor& weights, const ModelConfig& config,
                                   const Hypothesis& y, const Hypothesis& y_star);

}  // namespace shsbm
