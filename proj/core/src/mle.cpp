#include "shsbm/mle.hpp"

#include <cmath>

#include "shsbm/errors.hpp"
#include "shsbm/parallel.hpp"

namespace shsbm {

namespace {

template <typename Fn>
void for_each_within_subset(const Hypothesis& y, int m, Fn&& fn) {
    for (const auto& members : y.communities()) {
        const int size = static_cast<int>(members.size());
        std::vector<int> idx(m);
        for (int i = 0; i < m; ++i) idx[i] = i;
        std::vector<int> subset(m);
        while (true) {
            for (int i = 0; i < m; ++i) subset[i] = members[idx[i]];
            fn(subset);
            int i = m - 1;
            while (i >= 0 && idx[i] == size - m + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
}

}  // namespace

double score(const WeightTensor& weights, const Hypothesis& y) {
    if (y.n() != weights.config.n) fail("shape_mismatch", "hypothesis does not match tensor");
    const int m = weights.config.m;
    if (m > y.k) fail("shape_mismatch", "m exceeds community size");
    double total = 0.0;
    for_each_within_subset(y, m, [&](const std::vector<int>& subset) {
        total += weights.values[subset_rank(subset, weights.config.n, m)];
    });
    return total;
}

MleResult solve(const WeightTensor& weights, int r, int k, Sense sense, int jobs,
                std::uint64_t class_cap) {
    weights.validate();
    if (jobs < 1) fail("invalid_argument", "jobs must be >= 1");
    ClassEnumerator classes(weights.config.n, r, k);
    const std::uint64_t total = classes.size_checked(class_cap);

    struct ChunkBest {
        double best = 0.0;
        bool seen = false;
        std::vector<std::uint64_t> ties;
    };
    std::vector<ChunkBest> chunk_results(static_cast<std::size_t>(jobs));
    const double direction = sense == Sense::maximize ? 1.0 : -1.0;

    run_chunked(0, total, jobs, [&](std::uint64_t begin, std::uint64_t end, int chunk) {
        ChunkBest local;
        for (std::uint64_t index = begin; index < end; ++index) {
            const double value = direction * score(weights, classes.at(index));
            if (!local.seen || value > local.best) {
                local.best = value;
                local.seen = true;
                local.ties.assign(1, index);
            } else if (value == local.best) {
                local.ties.push_back(index);
            }
        }
        chunk_results[chunk] = std::move(local);
    });

    double best = 0.0;
    bool seen = false;
    std::vector<std::uint64_t> ties;
    for (const auto& chunk : chunk_results) {
        if (!chunk.seen) continue;
        if (!seen || chunk.best > best) {
            best = chunk.best;
            seen = true;
            ties = chunk.ties;
        } else if (chunk.best == best) {
            ties.insert(ties.end(), chunk.ties.begin(), chunk.ties.end());
        }
    }
    if (!seen) fail("internal_error", "empty hypothesis space");

    MleResult result;
    result.best_score = direction * best;
    result.classes_evaluated = total;
    result.argmax_classes.reserve(ties.size());
    for (std::uint64_t index : ties) result.argmax_classes.push_back(classes.at(index));
    result.unique = result.argmax_classes.size() == 1;
    return result;
}

bool recovery_success(const MleResult& result, const Hypothesis& y_star) {
    if (!result.unique) return false;
    return result.argmax_classes.front() == canonical_form(y_star);
}

std::pair<MleResult, double> solve_with_margin(const WeightTensor& weights,
                                               const Hypothesis& reference, Sense sense,
                                               int jobs, std::uint64_t class_cap) {
    weights.validate();
    reference.validate();
    if (jobs < 1) fail("invalid_argument", "jobs must be >= 1");
    ClassEnumerator classes(weights.config.n, reference.r, reference.k);
    const std::uint64_t total = classes.size_checked(class_cap);
    const std::uint64_t reference_index = classes.index_of(reference);
    const double direction = sense == Sense::maximize ? 1.0 : -1.0;

    struct ChunkBest {
        double best = 0.0;
        bool seen = false;
        std::vector<std::uint64_t> ties;
        double best_other = 0.0;
        bool seen_other = false;
    };
    std::vector<ChunkBest> chunk_results(static_cast<std::size_t>(jobs));
    double reference_score = 0.0;

    run_chunked(0, total, jobs, [&](std::uint64_t begin, std::uint64_t end, int chunk) {
        ChunkBest local;
        for (std::uint64_t index = begin; index < end; ++index) {
            const double value = direction * score(weights, classes.at(index));
            if (!local.seen || value > local.best) {
                local.best = value;
                local.seen = true;
                local.ties.assign(1, index);
            } else if (value == local.best) {
                local.ties.push_back(index);
            }
            if (index == reference_index) {
                reference_score = value;
            } else if (!local.seen_other || value > local.best_other) {
                local.best_other = value;
                local.seen_other = true;
            }
        }
        chunk_results[chunk] = std::move(local);
    });

    double best = 0.0;
    bool seen = false;
    std::vector<std::uint64_t> ties;
    double best_other = 0.0;
    bool seen_other = false;
    for (const auto& chunk : chunk_results) {
        if (chunk.seen_other && (!seen_other || chunk.best_other > best_other)) {
            best_other = chunk.best_other;
            seen_other = true;
        }
        if (!chunk.seen) continue;
        if (!seen || chunk.best > best) {
            best = chunk.best;
            seen = true;
            ties = chunk.ties;
        } else if (chunk.best == best) {
            ties.insert(ties.end(), chunk.ties.begin(), chunk.ties.end());
        }
    }
    if (!seen) fail("internal_error", "empty hypothesis space");
    if (!seen_other) fail("invalid_argument", "margin needs at least two classes");

    MleResult result;
    result.best_score = direction * best;
    result.classes_evaluated = total;
    result.argmax_classes.reserve(ties.size());
    for (std::uint64_t index : ties) result.argmax_classes.push_back(classes.at(index));
    result.unique = result.argmax_classes.size() == 1;
    return {std::move(result), reference_score - best_other};
}

NoiseSignalDecomposition decompose(const WeightTensor& weights, const ModelConfig& config,
                                   const Hypothesis& y, const Hypothesis& y_star) {
    if (y.n() != config.n || y_star.n() != config.n || y.r != y_star.r || y.k != y_star.k) {
        fail("shape_mismatch", "hypotheses must match the config");
    }
    if (weights.values.size() != config.edge_count()) {
        fail("shape_mismatch", "tensor does not match config");
    }
    const int m = config.m;

    // Only entries where the two membership tensors differ contribute.
    NoiseSignalDecomposition out;
    for_each_within_subset(y, m, [&](const std::vector<int>& subset) {
        if (membership_indicator(y_star, subset) == 1) return;
        const double w = weights.values[subset_rank(subset, config.n, m)];
        out.noise += w - config.q;
        out.signal += config.q;
    });
    for_each_within_subset(y_star, m, [&](const std::vector<int>& subset) {
        if (membership_indicator(y, subset) == 1) return;
        const double w = weights.values[subset_rank(subset, config.n, m)];
        out.noise -= w - config.p;
        out.signal -= config.p;
    });

    const auto stats = disagreement(y, y_star, m);
    const double expected_signal = -(config.p - config.q) * static_cast<double>(stats.d);
    if (std::fabs(out.signal - expected_signal) > 1e-9) {
        fail("internal_error", "signal term does not match -(p-q) d(Y)");
    }
    return out;
}

}  // namespace shsbm
