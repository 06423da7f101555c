#include "shsbm/enumeration.hpp"

#include <algorithm>
#include <string>

#include "shsbm/errors.hpp"

namespace shsbm {

ClassEnumerator::ClassEnumerator(int n, int r, int k) : space_(space_size(n, r, k)) {
    level_radix_.resize(r);
    level_place_.assign(r, 1);
    partitions_per_support_ = 1;
    for (int i = 0; i < r; ++i) {
        level_radix_[i] = binom_u64(static_cast<std::int64_t>(r - i) * k - 1, k - 1);
    }
    for (int i = r - 1; i >= 0; --i) {
        level_place_[i] = partitions_per_support_;
        // place of level i = product of radices of deeper levels
        if (partitions_per_support_ > 0 && level_radix_[i] != 0 &&
            partitions_per_support_ > UINT64_MAX / level_radix_[i]) {
            fail("enumeration_guard", "partition count exceeds 64 bits");
        }
        partitions_per_support_ *= level_radix_[i];
    }
    if (space_.class_size != BigInt(binom(n, static_cast<std::int64_t>(r) * k)) *
                                 BigInt(partitions_per_support_)) {
        fail("internal_error", "class index layout does not match class_size");
    }
}

std::uint64_t ClassEnumerator::size_checked(std::uint64_t cap) const {
    if (space_.class_size > cap) {
        fail("enumeration_guard", "class count " + space_.class_size.str() +
                                      " exceeds cap " + std::to_string(cap));
    }
    return space_.class_size.convert_to<std::uint64_t>();
}

Hypothesis ClassEnumerator::at(std::uint64_t index) const {
    const int n = space_.n;
    const int r = space_.r;
    const int k = space_.k;
    const std::uint64_t support_rank = index / partitions_per_support_;
    std::uint64_t partition_rank = index % partitions_per_support_;

    const std::vector<int> support = subset_unrank(support_rank, n, r * k);
    Hypothesis y;
    y.r = r;
    y.k = k;
    y.labels.assign(n, r);

    std::vector<int> avail = support;
    for (int level = 0; level < r; ++level) {
        const std::uint64_t digit = partition_rank / level_place_[level];
        partition_rank %= level_place_[level];
        // avail.front() anchors this community; companions are chosen from the rest.
        const std::vector<int> companion_pos =
            subset_unrank(digit, static_cast<int>(avail.size()) - 1, k - 1);
        std::vector<bool> taken(avail.size(), false);
        taken[0] = true;
        y.labels[avail[0]] = level;
        for (int pos : companion_pos) {
            taken[pos + 1] = true;
            y.labels[avail[pos + 1]] = level;
        }
        std::vector<int> rest;
        rest.reserve(avail.size() - k);
        for (std::size_t i = 0; i < avail.size(); ++i) {
            if (!taken[i]) rest.push_back(avail[i]);
        }
        avail = std::move(rest);
    }
    return y;
}

std::uint64_t ClassEnumerator::index_of(const Hypothesis& y) const {
    const int n = space_.n;
    const int r = space_.r;
    const int k = space_.k;
    if (y.n() != n || y.r != r || y.k != k) {
        fail("shape_mismatch", "hypothesis does not match this enumerator's (n, r, k)");
    }
    const Hypothesis canon = canonical_form(y);

    std::vector<int> support;
    support.reserve(static_cast<std::size_t>(r) * k);
    for (int v = 0; v < n; ++v) {
        if (canon.labels[v] != r) support.push_back(v);
    }
    const std::uint64_t support_rank = subset_rank(support, n, r * k);

    std::uint64_t partition_rank = 0;
    std::vector<int> avail = support;
    for (int level = 0; level < r; ++level) {
        // canonical form guarantees avail.front() carries label `level`
        std::vector<int> companion_pos;
        companion_pos.reserve(k - 1);
        std::vector<int> rest;
        rest.reserve(avail.size() - k);
        for (std::size_t i = 1; i < avail.size(); ++i) {
            if (canon.labels[avail[i]] == level) {
                companion_pos.push_back(static_cast<int>(i) - 1);
            } else {
                rest.push_back(avail[i]);
            }
        }
        const std::uint64_t digit =
            subset_rank(companion_pos, static_cast<int>(avail.size()) - 1, k - 1);
        partition_rank += digit * level_place_[level];
        avail = std::move(rest);
    }
    return support_rank * partitions_per_support_ + partition_rank;
}

namespace {

// Sorted m-subsets of a sorted member list, streamed through a callback.
template <typename Fn>
void for_each_subset(const std::vector<int>& members, int m, Fn&& fn) {
    const int size = static_cast<int>(members.size());
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    std::vector<int> subset(m);
    while (true) {
        for (int i = 0; i < m; ++i) subset[i] = members[idx[i]];
        fn(subset);
        int i = m - 1;
        while (i >= 0 && idx[i] == size - m + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::uint64_t one_sided_count(const Hypothesis& from, const Hypothesis& to, int m) {
    std::uint64_t count = 0;
    for (const auto& members : from.communities()) {
        for_each_subset(members, m, [&](const std::vector<int>& subset) {
            if (membership_indicator(to, subset) == 0) ++count;
        });
    }
    return count;
}

}  // namespace

DisagreementStats disagreement(const Hypothesis& y, const Hypothesis& y_star, int m) {
    if (y.n() != y_star.n() || y.r != y_star.r || y.k != y_star.k) {
        fail("shape_mismatch", "hypotheses must share (n, r, k)");
    }
    if (m < 2 || m > y.k) fail("invalid_argument", "m must satisfy 2 <= m <= k");
    DisagreementStats stats;
    stats.d = one_sided_count(y_star, y, m);
    const std::uint64_t reverse = one_sided_count(y, y_star, m);
    if (reverse != stats.d) {
        fail("internal_error", "one-sided disagreement counts differ on equal-size communities");
    }
    stats.d_pair = one_sided_count(y_star, y, 2);
    return stats;
}

MisclassificationStats misclassification_stats(const Hypothesis& y, const Hypothesis& y_star) {
    if (y.n() != y_star.n() || y.r != y_star.r || y.k != y_star.k) {
        fail("shape_mismatch", "hypotheses must share (n, r, k)");
    }
    const int r = y.r;
    const int k = y.k;
    const auto mine = y.communities();
    const auto truth = y_star.communities();

    // overlap[i][j] = |C_j(y) ∩ C*_i|
    std::vector<std::vector<int>> overlap(r, std::vector<int>(r, 0));
    {
        std::vector<int> truth_slot(y.n(), -1);
        for (int i = 0; i < r; ++i) {
            for (int v : truth[i]) truth_slot[v] = i;
        }
        for (int j = 0; j < r; ++j) {
            for (int v : mine[j]) {
                if (truth_slot[v] >= 0) ++overlap[truth_slot[v]][j];
            }
        }
    }

    // Slot i takes the community with majority overlap when one exists.
    std::vector<int> slot_of(r, -1);   // y-community j -> slot
    std::vector<int> community_in(r, -1);  // slot i -> y-community
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            if (2 * overlap[i][j] > k) {
                slot_of[j] = i;
                community_in[i] = j;
                break;
            }
        }
    }
    int next_slot = 0;
    for (int j = 0; j < r; ++j) {
        if (slot_of[j] >= 0) continue;
        while (community_in[next_slot] >= 0) ++next_slot;
        slot_of[j] = next_slot;
        community_in[next_slot] = j;
    }

    MisclassificationStats stats;
    stats.M.resize(r);
    stats.N1.resize(r);
    stats.N2.resize(r);
    stats.reordered_partition.resize(r + 1);
    for (int i = 0; i < r; ++i) stats.reordered_partition[i] = mine[community_in[i]];
    for (int v = 0; v < y.n(); ++v) {
        if (y.labels[v] == r) stats.reordered_partition[r].push_back(v);
    }

    const auto pairs = [](int x) { return x * (x - 1) / 2; };
    for (int i = 0; i < r; ++i) {
        const int kept = overlap[i][community_in[i]];
        stats.M[i] = k - kept;
        stats.N1[i] = stats.M[i] * kept;
        int other_pairs = 0;
        for (int slot = 0; slot < r; ++slot) {
            if (slot != i) other_pairs += pairs(overlap[i][community_in[slot]]);
        }
        stats.N2[i] = pairs(stats.M[i]) - other_pairs;
    }
    return stats;
}

std::map<std::uint64_t, std::uint64_t> count_D_t(int n, int r, int k, int m,
                                                 const Hypothesis& y_star,
                                                 std::uint64_t class_cap) {
    ClassEnumerator classes(n, r, k);
    const std::uint64_t total = classes.size_checked(class_cap);
    std::map<std::uint64_t, std::uint64_t> histogram;
    for (std::uint64_t index = 0; index < total; ++index) {
        const Hypothesis y = classes.at(index);
        ++histogram[disagreement(y, y_star, m).d];
    }
    return histogram;
}

}  // namespace shsbm
