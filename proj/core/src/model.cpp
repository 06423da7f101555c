#include "shsbm/model.hpp"

#include <algorithm>
#include <cmath>

#include "shsbm/errors.hpp"
#include "shsbm/rng.hpp"

namespace shsbm {

void ModelConfig::validate() const {
    if (n <= 0) fail("invalid_config", "n must be positive");
    if (r < 1) fail("invalid_config", "r must be >= 1");
    if (k < 2) fail("invalid_config", "k must be >= 2");
    if (m < 2 || m > k) fail("invalid_config", "m must satisfy 2 <= m <= k");
    if (static_cast<std::int64_t>(r) * k > n) fail("invalid_config", "r*k must be <= n");
    if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0) fail("invalid_config", "p, q must lie in [0,1]");
    if (p == q) fail("invalid_config", "p must differ from q");
}

std::uint64_t ModelConfig::edge_count() const { return binom_u64(n, m); }

std::uint64_t ModelConfig::within_per_community() const { return binom_u64(k, m); }

std::string family_name(Family family) {
    switch (family) {
        case Family::bernoulli: return "bernoulli";
        case Family::beta_mean: return "beta_mean";
        case Family::point_mass: return "point_mass";
    }
    fail("internal_error", "unknown family");
}

Family family_from_name(const std::string& name) {
    if (name == "bernoulli") return Family::bernoulli;
    if (name == "beta_mean") return Family::beta_mean;
    if (name == "point_mass") return Family::point_mass;
    fail("parse_error", "unknown weight family '" + name + "'");
}

WeightDistribution WeightDistribution::bernoulli(double mean) {
    WeightDistribution dist;
    dist.family = Family::bernoulli;
    dist.mean = mean;
    dist.sub_gaussian_sq = 0.25;
    dist.validate();
    return dist;
}

WeightDistribution WeightDistribution::beta_mean(double mean, double precision) {
    WeightDistribution dist;
    dist.family = Family::beta_mean;
    dist.mean = mean;
    dist.precision = precision;
    dist.sub_gaussian_sq = 0.25;
    dist.validate();
    return dist;
}

WeightDistribution WeightDistribution::point_mass(double mean) {
    WeightDistribution dist;
    dist.family = Family::point_mass;
    dist.mean = mean;
    dist.sub_gaussian_sq = 0.0;
    dist.validate();
    return dist;
}

void WeightDistribution::validate() const {
    if (mean < 0.0 || mean > 1.0) fail("invalid_config", "weight mean must lie in [0,1]");
    if (sub_gaussian_sq < 0.0 || sub_gaussian_sq > 0.25) {
        fail("invalid_config", "sub_gaussian_sq must lie in [0, 1/4]");
    }
    if (family == Family::beta_mean) {
        if (precision <= 0.0) fail("invalid_config", "beta_mean precision must be positive");
        if (mean <= 0.0 || mean >= 1.0) {
            fail("invalid_config", "beta_mean mean must lie in (0,1)");
        }
    }
    if (family == Family::point_mass && sub_gaussian_sq != 0.0) {
        fail("invalid_config", "point_mass must report sub_gaussian_sq = 0");
    }
}

double WeightDistribution::variance() const {
    switch (family) {
        case Family::bernoulli: return mean * (1.0 - mean);
        case Family::beta_mean: return mean * (1.0 - mean) / (1.0 + precision);
        case Family::point_mass: return 0.0;
    }
    fail("internal_error", "unknown family");
}

double WeightDistribution::draw(Rng& rng) const {
    switch (family) {
        case Family::bernoulli: return rng.bernoulli(mean) ? 1.0 : 0.0;
        case Family::beta_mean: return rng.beta(mean * precision, (1.0 - mean) * precision);
        case Family::point_mass: return mean;
    }
    fail("internal_error", "unknown family");
}

void Instance::validate() const {
    config.validate();
    dist_in.validate();
    dist_out.validate();
    if (dist_in.mean != config.p) fail("config_mismatch", "dist_in mean must equal p");
    if (dist_out.mean != config.q) fail("config_mismatch", "dist_out mean must equal q");
}

Instance Instance::bernoulli(const ModelConfig& config) {
    Instance instance;
    instance.config = config;
    instance.dist_in = WeightDistribution::bernoulli(config.p);
    instance.dist_out = WeightDistribution::bernoulli(config.q);
    instance.validate();
    return instance;
}

void Hypothesis::validate() const {
    if (r < 1 || k < 2) fail("invalid_config", "hypothesis requires r >= 1, k >= 2");
    if (static_cast<std::int64_t>(r) * k > n()) fail("invalid_config", "r*k must be <= n");
    std::vector<int> counts(r + 1, 0);
    for (int label : labels) {
        if (label < 0 || label > r) fail("invalid_config", "label out of range");
        ++counts[label];
    }
    for (int c = 0; c < r; ++c) {
        if (counts[c] != k) fail("invalid_config", "every community must have exactly k members");
    }
}

std::vector<std::vector<int>> Hypothesis::communities() const {
    std::vector<std::vector<int>> members(r);
    for (int v = 0; v < n(); ++v) {
        if (labels[v] < r) members[labels[v]].push_back(v);
    }
    return members;
}

int membership_indicator(const Hypothesis& y, const std::vector<int>& subset) {
    if (subset.empty()) fail("invalid_subset", "subset must be non-empty");
    int prev = -1;
    const int first_label = [&] {
        const int v = subset.front();
        if (v < 0 || v >= y.n()) fail("invalid_subset", "node id out of range");
        return y.labels[v];
    }();
    for (int v : subset) {
        if (v < 0 || v >= y.n()) fail("invalid_subset", "node id out of range");
        if (v <= prev) fail("invalid_subset", "subset must be sorted and distinct");
        prev = v;
        if (y.labels[v] != first_label) return 0;
    }
    return first_label < y.r ? 1 : 0;
}

Hypothesis canonical_form(const Hypothesis& y) {
    std::vector<int> first_member(y.r, -1);
    std::vector<int> order;
    for (int v = 0; v < y.n(); ++v) {
        const int label = y.labels[v];
        if (label < y.r && first_member[label] < 0) {
            first_member[label] = v;
            order.push_back(label);
        }
    }
    std::vector<int> relabel(y.r, -1);
    for (int rank = 0; rank < static_cast<int>(order.size()); ++rank) relabel[order[rank]] = rank;
    Hypothesis out = y;
    for (int v = 0; v < y.n(); ++v) {
        if (y.labels[v] < y.r) out.labels[v] = relabel[y.labels[v]];
    }
    return out;
}

void WeightTensor::validate() const {
    config.validate();
    if (values.size() != config.edge_count()) {
        fail("shape_mismatch", "tensor length must equal C(n,m)");
    }
    for (double w : values) {
        if (!(w >= 0.0 && w <= 1.0)) fail("invalid_config", "weights must lie in [0,1]");
    }
}

double WeightTensor::entry(const std::vector<int>& subset) const {
    return values[subset_rank(subset, config.n, config.m)];
}

WeightTensor sample_weights(const ModelConfig& config, const Hypothesis& y_star,
                            const WeightDistribution& dist_in,
                            const WeightDistribution& dist_out, std::uint64_t seed) {
    config.validate();
    y_star.validate();
    if (y_star.n() != config.n || y_star.r != config.r || y_star.k != config.k) {
        fail("shape_mismatch", "hypothesis does not match config");
    }
    if (dist_in.mean != config.p) fail("config_mismatch", "dist_in mean must equal p");
    if (dist_out.mean != config.q) fail("config_mismatch", "dist_out mean must equal q");

    WeightTensor tensor;
    tensor.config = config;
    tensor.values.resize(config.edge_count());
    const std::uint64_t mixed = mix64(seed);
    std::vector<int> subset(config.m);
    for (int i = 0; i < config.m; ++i) subset[i] = i;
    std::uint64_t rank = 0;
    do {
        Rng entry_rng(mix64(mixed ^ (rank + 1)));
        const bool within = membership_indicator(y_star, subset) == 1;
        tensor.values[rank] = (within ? dist_in : dist_out).draw(entry_rng);
        ++rank;
    } while (subset_next(subset, config.n));
    return tensor;
}

WeightTensor expected_tensor(const ModelConfig& config, const Hypothesis& y) {
    config.validate();
    y.validate();
    if (y.n() != config.n || y.r != config.r || y.k != config.k) {
        fail("shape_mismatch", "hypothesis does not match config");
    }
    WeightTensor tensor;
    tensor.config = config;
    tensor.values.resize(config.edge_count());
    std::vector<int> subset(config.m);
    for (int i = 0; i < config.m; ++i) subset[i] = i;
    std::uint64_t rank = 0;
    do {
        tensor.values[rank] = membership_indicator(y, subset) == 1 ? config.p : config.q;
        ++rank;
    } while (subset_next(subset, config.n));
    return tensor;
}

Hypothesis random_hypothesis(int n, int r, int k, Rng& rng) {
    if (r < 1 || k < 2 || static_cast<std::int64_t>(r) * k > n) {
        fail("invalid_config", "random_hypothesis requires r >= 1, k >= 2, r*k <= n");
    }
    // Fisher-Yates permutation; blocks of k get community ids, the tail is
    // isolated.  Every labeled hypothesis arises from the same number of
    // permutations, so the draw is uniform.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    Hypothesis y;
    y.r = r;
    y.k = k;
    y.labels.assign(n, r);
    for (int c = 0; c < r; ++c) {
        for (int i = 0; i < k; ++i) y.labels[perm[c * k + i]] = c;
    }
    return y;
}

}  // namespace shsbm
