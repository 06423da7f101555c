#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shsbm/model.hpp"

namespace shsbm {

struct MIResult {
    double exact_mi = 0.0;      // nats
    double lemma2_bound = 0.0;  // nats
    double slack = 0.0;         // bound - exact
};

// I(y*; A) under the uniform prior on labeled hypotheses, by enumerating all
// 2^C(n,m) binary weight tensors; p and q are Bernoulli means.  One bitmask
// per tensor class (weight r!) since relabelings share the membership tensor.
// Guards: C(n,m) <= 20 and labeled |Y| <= 10^4.
MIResult exact_mi(const ModelConfig& config);

struct LemmaReport {
    std::string lemma_id;
    std::uint64_t instances_checked = 0;
    double max_violation = 0.0;  // <= 0 when every instance passes
    std::vector<std::string> details;

    bool pass() const { return max_violation <= 0.0; }
};

struct VerifyCaps {
    int max_n = 8;
    int max_r = 2;
    int max_k = 4;
    std::uint64_t seed = 0;
    std::uint64_t class_cap = 10'000;
};

// Exhaustive check of one named identity or inequality over every valid
// config within caps (or over a parameter grid for the scalar lemmas).
// Known ids: signal_identity, d_range, pair_relation, D_t_bound,
// labeled_count_bound, decomposition, kl_chain, bhatia_davis, count_formula,
// tail_bernstein, tail_hoeffding.
LemmaReport verify_lemma(const std::string& lemma_id, const VerifyCaps& caps = {});

const std::vector<std::string>& all_lemma_ids();

enum class TailBound { bernstein, hoeffding };

// Monte Carlo estimate of P(noise term >= |p-q| d) with a one-sided 99%
// Clopper-Pearson upper confidence limit; passes when the limit is at most
// the analytic bound (trivially when the bound is >= 1).  With both weight
// families degenerate the event is impossible; the check then requires an
// empty hit count instead of a confidence limit.
//   bernstein: 2 exp(-3 (p-q)^2 d / (28 phat (1-qhat))), phat = max(p,q)
//   hoeffding: 2 exp(-(p-q)^2 d / (4 max{sigma_in^2, sigma_out^2}))
LemmaReport tail_check(const Instance& instance, const Hypothesis& y,
                       const Hypothesis& y_star, std::uint64_t samples, TailBound bound,
                       std::uint64_t base_seed);

}  // namespace shsbm
