#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "shsbm/combinatorics.hpp"
#include "shsbm/model.hpp"

namespace shsbm {

inline constexpr std::uint64_t kDefaultClassCap = 10'000'000;

// Indexable enumeration of one canonical representative per tensor class.
// Index layout: support_rank * partitions_per_support + partition_rank, where
// the support (the r*k non-isolated nodes) is combinadic-ranked and the
// partition digits are mixed-radix with radix C((r-i)k - 1, k - 1) at level i
// (the smallest unassigned node anchors community i, its k-1 companions are
// combinadic-ranked).  Representatives come out in canonical form, so the
// order is deterministic and ranges [begin, end) split the space exactly.
class ClassEnumerator {
public:
    ClassEnumerator(int n, int r, int k);

    const HypothesisSpace& space() const { return space_; }

    // Throws enumeration_guard when class_size exceeds cap.
    std::uint64_t size_checked(std::uint64_t cap = kDefaultClassCap) const;

    Hypothesis at(std::uint64_t index) const;

    // Inverse of at(): the index of y's tensor class (y need not be canonical).
    std::uint64_t index_of(const Hypothesis& y) const;

private:
    HypothesisSpace space_;
    std::uint64_t partitions_per_support_;
    std::vector<std::uint64_t> level_radix_;  // C((r-i)k - 1, k - 1)
    std::vector<std::uint64_t> level_place_;  // product of radices below level i
};

struct DisagreementStats {
    std::uint64_t d = 0;       // m-subsets covered by y_star but not by y
    std::uint64_t d_pair = 0;  // same count at order 2
};

// One-sided disagreement; equal community sizes force the two one-sided
// counts to coincide, which is re-checked on every call.
DisagreementStats disagreement(const Hypothesis& y, const Hypothesis& y_star, int m);

struct MisclassificationStats {
    std::vector<int> M;    // misclassified nodes per true community
    std::vector<int> N1;   // M[i] * overlap(i, i)
    std::vector<int> N2;   // C(M[i], 2) - sum over other communities of C(overlap, 2)
    std::vector<std::vector<int>> reordered_partition;  // r matched communities + isolated set
};

// Reorders y's communities against y_star's: any community overlapping a true
// community in more than k/2 nodes takes its slot, leftovers fill remaining
// slots by ascending index.  Sum of N1 + N2 equals the pairwise disagreement.
MisclassificationStats misclassification_stats(const Hypothesis& y, const Hypothesis& y_star);

// Exact histogram over tensor classes of the disagreement with y_star.
std::map<std::uint64_t, std::uint64_t> count_D_t(int n, int r, int k, int m,
                                                 const Hypothesis& y_star,
                                                 std::uint64_t class_cap = kDefaultClassCap);

}  // namespace shsbm
