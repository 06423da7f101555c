#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shsbm/combinatorics.hpp"

namespace shsbm {

class Rng;

// Instance tuple (n, r, k, m, p, q): n nodes, r planted communities of size k,
// n - r*k isolated nodes, hyperedges of order m, mean weight p inside a
// community and q elsewhere.
struct ModelConfig {
    int n = 0;
    int r = 0;
    int k = 0;
    int m = 0;
    double p = 0.0;
    double q = 0.0;

    // Throws invalid_config unless 2 <= m <= k, r >= 1, r*k <= n,
    // p,q in [0,1], p != q.
    void validate() const;

    std::uint64_t edge_count() const;          // C(n, m)
    std::uint64_t within_per_community() const;  // C(k, m)
};

enum class Family { bernoulli, beta_mean, point_mass };

std::string family_name(Family family);
Family family_from_name(const std::string& name);

struct WeightDistribution {
    Family family = Family::bernoulli;
    double mean = 0.0;
    double precision = 0.0;       // beta_mean shape scale: Beta(mean*precision, (1-mean)*precision)
    double sub_gaussian_sq = 0.25;  // variance proxy; capped at 1/4 on [0,1], 0 for point_mass

    static WeightDistribution bernoulli(double mean);
    static WeightDistribution beta_mean(double mean, double precision);
    static WeightDistribution point_mass(double mean);

    void validate() const;
    double variance() const;  // analytic
    double draw(Rng& rng) const;
};

// Config plus its two weight families; the unit the sampler, the harness and
// the file formats operate on.
struct Instance {
    ModelConfig config;
    WeightDistribution dist_in;
    WeightDistribution dist_out;

    // Validates both parts and that means equal (p, q).
    void validate() const;

    static Instance bernoulli(const ModelConfig& config);
};

// Membership labeling: labels[v] in {0..r-1} for community members, r for
// isolated nodes; exactly k nodes per community.
struct Hypothesis {
    int r = 0;
    int k = 0;
    std::vector<int> labels;

    void validate() const;
    int n() const { return static_cast<int>(labels.size()); }
    std::vector<std::vector<int>> communities() const;  // r sorted member lists
    bool operator==(const Hypothesis&) const = default;
};

// 1 iff all of subset share one community label; throws invalid_subset on
// duplicates or out-of-range ids.
int membership_indicator(const Hypothesis& y, const std::vector<int>& subset);

// Community ids reassigned in increasing order of each community's smallest
// member; two hypotheses induce the same membership tensor iff their
// canonical forms are equal.
Hypothesis canonical_form(const Hypothesis& y);

// Dense weight tensor over combinadic-ranked m-subsets.
struct WeightTensor {
    ModelConfig config;
    std::vector<double> values;  // length C(n, m), each in [0, 1]

    void validate() const;
    double entry(const std::vector<int>& subset) const;
};

// Independent draw per m-subset: dist_in where y_star covers the subset,
// dist_out otherwise.  Bit-for-bit reproducible for a fixed seed; each entry
// gets its own stream derived from (seed, rank), so no entry's value depends
// on another entry's draw.
WeightTensor sample_weights(const ModelConfig& config, const Hypothesis& y_star,
                            const WeightDistribution& dist_in,
                            const WeightDistribution& dist_out, std::uint64_t seed);

// Entry = p where y covers the subset, q elsewhere.
WeightTensor expected_tensor(const ModelConfig& config, const Hypothesis& y);

// Uniform draw over all labeled hypotheses for (n, r, k).
Hypothesis random_hypothesis(int n, int r, int k, Rng& rng);

}  // namespace shsbm
