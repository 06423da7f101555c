#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "shsbm/combinatorics.hpp"
#include "shsbm/enumeration.hpp"
#include "shsbm/errors.hpp"
#include "shsbm/model.hpp"
#include "shsbm/rng.hpp"

using namespace shsbm;

namespace {

bool throws_code(const std::string& code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& error) {
        return error.code() == code;
    }
    return false;
}

}  // namespace

TEST_CASE("binom small values and boundary conventions") {
    CHECK(binom(5, 2) == 10);
    CHECK(binom(4, 0) == 1);
    CHECK(binom(3, 5) == 0);
    CHECK(binom(7, -1) == 0);
    CHECK(binom(0, 0) == 1);
    CHECK(binom(50, 25) == BigInt("126410606437752"));
}

TEST_CASE("binom_u64 guards 64-bit overflow") {
    CHECK(binom_u64(60, 30) == 118264581564861424ULL);
    CHECK(throws_code("enumeration_guard", [] { binom_u64(100, 50); }));
}

TEST_CASE("log_binom matches the exact big-integer logarithm") {
    const double exact = log_big(binom(50, 25));
    CHECK(std::fabs(log_binom(50, 25) - exact) <= 1e-9 * exact);
    CHECK(log_binom(5, 7) == -std::numeric_limits<double>::infinity());
    CHECK(log_binom(8, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("log_big handles values beyond double range") {
    CHECK(log_big(BigInt(1)) == 0.0);
    const BigInt huge = BigInt(1) << 2000;
    CHECK(log_big(huge) == doctest::Approx(2000.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(throws_code("invalid_argument", [] { log_big(BigInt(0)); }));
}

TEST_CASE("subset_rank is the lexicographic position") {
    CHECK(subset_rank({0, 1}, 4, 2) == 0);
    CHECK(subset_rank({2, 3}, 4, 2) == 5);
    CHECK(subset_rank({0, 1, 2}, 6, 3) == 0);
    CHECK(throws_code("invalid_subset", [] { subset_rank({1, 0}, 4, 2); }));
    CHECK(throws_code("invalid_subset", [] { subset_rank({1, 1}, 4, 2); }));
    CHECK(throws_code("invalid_subset", [] { subset_rank({2, 4}, 4, 2); }));
    CHECK(throws_code("invalid_subset", [] { subset_rank({1}, 4, 2); }));
}

TEST_CASE("subset rank and unrank are mutually inverse") {
    for (int n = 1; n <= 8; ++n) {
        for (int m = 1; m <= std::min(n, 4); ++m) {
            const std::uint64_t total = binom_u64(n, m);
            std::set<std::vector<int>> seen;
            for (std::uint64_t rank = 0; rank < total; ++rank) {
                const std::vector<int> subset = subset_unrank(rank, n, m);
                CHECK(subset_rank(subset, n, m) == rank);
                seen.insert(subset);
            }
            CHECK(seen.size() == total);
        }
    }
    CHECK(throws_code("invalid_argument", [] { subset_unrank(6, 4, 2); }));
}

TEST_CASE("subset_next walks the lexicographic order") {
    std::vector<int> subset = {0, 1, 2};
    std::uint64_t rank = 0;
    do {
        CHECK(subset == subset_unrank(rank, 6, 3));
        ++rank;
    } while (subset_next(subset, 6));
    CHECK(rank == 20);
}

TEST_CASE("space_size counts labeled hypotheses and tensor classes") {
    const HypothesisSpace a = space_size(4, 1, 2);
    CHECK(a.labeled_size == 6);
    CHECK(a.class_size == 6);

    const HypothesisSpace b = space_size(6, 2, 2);
    CHECK(b.labeled_size == 90);
    CHECK(b.class_size == 45);

    const HypothesisSpace c = space_size(5, 1, 5);
    CHECK(c.labeled_size == 1);

    const HypothesisSpace d = space_size(12, 2, 4);
    CHECK(d.labeled_size == 34650);
    CHECK(d.class_size == 17325);

    CHECK(throws_code("invalid_config", [] { space_size(5, 2, 3); }));
}

TEST_CASE("log_labeled_size tracks the exact logarithm") {
    for (const auto& [n, r, k] : std::vector<std::array<int, 3>>{
             {4, 1, 2}, {6, 2, 2}, {12, 2, 4}, {40, 3, 5}}) {
        const double exact = log_big(space_size(n, r, k).labeled_size);
        CHECK(std::fabs(log_labeled_size(n, r, k) - exact) <= 1e-9 * std::max(exact, 1.0));
    }
}

TEST_CASE("stirling lower bound never exceeds the exact log count") {
    for (int n = 2; n <= 8; ++n) {
        for (int r = 1; r <= 2; ++r) {
            for (int k = 2; k <= 4; ++k) {
                if (r * k > n) continue;
                const StirlingReport report = stirling_report(n, r, k);
                CHECK(report.concrete_lower <= report.exact_log + 1e-12);
                CHECK(std::isfinite(report.asymptotic_form));
            }
        }
    }
}

TEST_CASE("class enumeration lists each tensor class exactly once") {
    ClassEnumerator small(4, 1, 2);
    CHECK(small.size_checked() == 6);
    std::set<std::vector<int>> seen;
    for (std::uint64_t i = 0; i < 6; ++i) {
        const Hypothesis y = small.at(i);
        y.validate();
        CHECK(canonical_form(y) == y);
        seen.insert(y.labels);
    }
    CHECK(seen.size() == 6);

    CHECK(ClassEnumerator(6, 2, 2).size_checked() == 45);
    CHECK(ClassEnumerator(5, 1, 5).size_checked() == 1);
    const Hypothesis whole = ClassEnumerator(5, 1, 5).at(0);
    CHECK(whole.labels == std::vector<int>{0, 0, 0, 0, 0});
}

TEST_CASE("index_of inverts class enumeration, canonical or not") {
    for (const auto& [n, r, k] : std::vector<std::array<int, 3>>{{7, 2, 2}, {8, 2, 3}}) {
        ClassEnumerator classes(n, r, k);
        const std::uint64_t total = classes.size_checked();
        for (std::uint64_t i = 0; i < total; ++i) {
            const Hypothesis y = classes.at(i);
            CHECK(classes.index_of(y) == i);
            if (r == 2) {
                Hypothesis swapped = y;
                for (int& label : swapped.labels) {
                    if (label == 0) {
                        label = 1;
                    } else if (label == 1) {
                        label = 0;
                    }
                }
                CHECK(classes.index_of(swapped) == i);
            }
        }
    }
}

TEST_CASE("size_checked enforces the class cap") {
    CHECK(throws_code("enumeration_guard", [] {
        ClassEnumerator(8, 2, 3).size_checked(10);
    }));
}

TEST_CASE("disagreement counts planted-only subsets") {
    Hypothesis truth{1, 2, {0, 0, 1, 1}};  // community {0,1} among 4 nodes
    SUBCASE("identical hypotheses") {
        const DisagreementStats stats = disagreement(truth, truth, 2);
        CHECK(stats.d == 0);
        CHECK(stats.d_pair == 0);
    }
    SUBCASE("one node swapped") {
        Hypothesis other{1, 2, {0, 1, 0, 1}};  // community {0,2}
        const DisagreementStats stats = disagreement(other, truth, 2);
        CHECK(stats.d == 1);
        CHECK(stats.d_pair == 1);
    }
    SUBCASE("every non-true class sits at distance one") {
        ClassEnumerator classes(4, 1, 2);
        for (std::uint64_t i = 0; i < 6; ++i) {
            const Hypothesis y = classes.at(i);
            const std::uint64_t expected = y == canonical_form(truth) ? 0 : 1;
            CHECK(disagreement(y, truth, 2).d == expected);
        }
    }
    SUBCASE("shape mismatch is rejected") {
        Hypothesis bigger{1, 2, {0, 0, 1, 1, 1}};
        CHECK(throws_code("shape_mismatch", [&] { disagreement(bigger, truth, 2); }));
    }
}

TEST_CASE("misclassification stats satisfy the pairwise decomposition") {
    Hypothesis truth{1, 2, {0, 0, 1, 1}};
    SUBCASE("identical hypotheses give zeros") {
        const MisclassificationStats stats = misclassification_stats(truth, truth);
        CHECK(stats.M == std::vector<int>{0});
        CHECK(stats.N1 == std::vector<int>{0});
        CHECK(stats.N2 == std::vector<int>{0});
    }
    SUBCASE("single swap") {
        Hypothesis other{1, 2, {0, 1, 0, 1}};
        const MisclassificationStats stats = misclassification_stats(other, truth);
        CHECK(stats.M == std::vector<int>{1});
        CHECK(stats.N1 == std::vector<int>{1});
        CHECK(stats.N2 == std::vector<int>{0});
    }
    SUBCASE("random pairs: sum of N1+N2 equals the pairwise disagreement") {
        Rng rng(2024);
        for (int n = 4; n <= 8; ++n) {
            for (int r = 1; r <= 2; ++r) {
                for (int k = 2; k <= 3; ++k) {
                    if (r * k > n) continue;
                    for (int draw = 0; draw < 50; ++draw) {
                        const Hypothesis a = random_hypothesis(n, r, k, rng);
                        const Hypothesis b = random_hypothesis(n, r, k, rng);
                        const MisclassificationStats stats = misclassification_stats(a, b);
                        std::int64_t total = 0;
                        for (int i = 0; i < r; ++i) total += stats.N1[i] + stats.N2[i];
                        CHECK(total ==
                              static_cast<std::int64_t>(disagreement(a, b, 2).d_pair));
                        CHECK(stats.reordered_partition.size() ==
                              static_cast<std::size_t>(r) + 1);
                    }
                }
            }
        }
    }
}

TEST_CASE("distance histogram is exact") {
    Hypothesis truth{1, 2, {0, 0, 1, 1}};
    const auto histogram = count_D_t(4, 1, 2, 2, truth);
    CHECK(histogram.size() == 2);
    CHECK(histogram.at(0) == 1);
    CHECK(histogram.at(1) == 5);

    Hypothesis truth6{2, 2, {0, 0, 1, 1, 2, 2}};
    const auto histogram6 = count_D_t(6, 2, 2, 2, truth6);
    std::uint64_t total = 0;
    for (const auto& [t, count] : histogram6) total += count;
    CHECK(total == 45);
    CHECK(histogram6.at(0) == 1);

    CHECK(throws_code("enumeration_guard", [&] { count_D_t(8, 2, 3, 2, truth, 10); }));
}

TEST_CASE("distance range bound holds on every enumerated pair") {
    for (int n = 4; n <= 7; ++n) {
        for (int r = 1; r <= 2; ++r) {
            for (int k = 2; k <= 3; ++k) {
                if (r * k > n) continue;
                ClassEnumerator classes(n, r, k);
                const std::uint64_t total = classes.size_checked();
                const Hypothesis truth = classes.at(total / 2);
                for (int m = 2; m <= k; ++m) {
                    const std::uint64_t lower = binom_u64(k - 1, m - 1);
                    const std::uint64_t upper = r * binom_u64(k, m);
                    for (std::uint64_t i = 0; i < total; ++i) {
                        const auto stats = disagreement(classes.at(i), truth, m);
                        if (stats.d == 0) {
                            CHECK(classes.at(i) == canonical_form(truth));
                            continue;
                        }
                        CHECK(stats.d >= lower);
                        CHECK(stats.d <= upper);
                        // pairwise count obeys d_pair * C(k,m) <= C(k,2) * d
                        CHECK(stats.d_pair * binom_u64(k, m) <= binom_u64(k, 2) * stats.d);
                    }
                }
            }
        }
    }
}

TEST_CASE("rng streams are deterministic and uniform_below is unbiased at the edge") {
    Rng a(99);
    Rng b(99);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(c.uniform_below(3) < 3);
    }
    CHECK(c.uniform_below(1) == 0);
}

TEST_CASE("mix64 separates nearby seeds") {
    CHECK(mix64(0) != 0);
    CHECK(mix64(1) != mix64(2));
    std::set<std::uint64_t> outputs;
    for (std::uint64_t s = 0; s < 100; ++s) outputs.insert(mix64(s));
    CHECK(outputs.size() == 100);
}
