#include "shsbm/combinatorics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "shsbm/errors.hpp"

namespace shsbm {

BigInt binom(std::int64_t a, std::int64_t b) {
    if (b < 0 || b > a) return 0;
    if (b > a - b) b = a - b;
    BigInt result = 1;
    for (std::int64_t i = 1; i <= b; ++i) {
        result *= a - b + i;
        result /= i;
    }
    return result;
}

std::uint64_t binom_u64(std::int64_t a, std::int64_t b) {
    BigInt value = binom(a, b);
    if (value > std::numeric_limits<std::uint64_t>::max()) {
        fail("enumeration_guard", "binomial coefficient C(" + std::to_string(a) + "," +
                                      std::to_string(b) + ") exceeds 64 bits");
    }
    return value.convert_to<std::uint64_t>();
}

double log_binom(std::int64_t a, std::int64_t b) {
    if (b < 0 || b > a) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(a) + 1.0) -
           std::lgamma(static_cast<double>(b) + 1.0) -
           std::lgamma(static_cast<double>(a - b) + 1.0);
}

double log_big(const BigInt& x) {
    if (x <= 0) fail("invalid_argument", "log_big requires a positive integer");
    const std::size_t bits = boost::multiprecision::msb(x);
    if (bits < 512) return std::log(x.convert_to<double>());
    // Keep the top bits as a double mantissa, add the shifted-out bits back in log space.
    const unsigned shift = static_cast<unsigned>(bits - 512);
    const BigInt top = x >> shift;
    return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

std::uint64_t subset_rank(const std::vector<int>& subset, int n, int m) {
    if (static_cast<int>(subset.size()) != m) {
        fail("invalid_subset", "expected " + std::to_string(m) + " elements");
    }
    int prev = -1;
    BigInt rank = 0;
    for (int i = 0; i < m; ++i) {
        const int v = subset[i];
        if (v <= prev || v >= n) fail("invalid_subset", "elements must be sorted, distinct, in [0,n)");
        // Count subsets that agree on the first i elements and take a smaller i-th one.
        for (int c = prev + 1; c < v; ++c) rank += binom(n - 1 - c, m - 1 - i);
        prev = v;
    }
    if (rank > std::numeric_limits<std::uint64_t>::max()) {
        fail("enumeration_guard", "subset rank exceeds 64 bits");
    }
    return rank.convert_to<std::uint64_t>();
}

std::vector<int> subset_unrank(std::uint64_t rank, int n, int m) {
    BigInt total = binom(n, m);
    if (rank >= total) fail("invalid_argument", "subset rank out of range");
    std::vector<int> subset(m);
    BigInt remaining = rank;
    int c = 0;
    for (int i = 0; i < m; ++i) {
        while (true) {
            BigInt block = binom(n - 1 - c, m - 1 - i);
            if (remaining < block) break;
            remaining -= block;
            ++c;
        }
        subset[i] = c++;
    }
    return subset;
}

bool subset_next(std::vector<int>& subset, int n) {
    const int m = static_cast<int>(subset.size());
    int i = m - 1;
    while (i >= 0 && subset[i] == n - m + i) --i;
    if (i < 0) return false;
    ++subset[i];
    for (int j = i + 1; j < m; ++j) subset[j] = subset[j - 1] + 1;
    return true;
}

HypothesisSpace space_size(int n, int r, int k) {
    if (n <= 0 || r < 1 || k < 2 || static_cast<std::int64_t>(r) * k > n) {
        fail("invalid_config", "space_size requires n > 0, r >= 1, k >= 2, r*k <= n");
    }
    HypothesisSpace space;
    space.n = n;
    space.r = r;
    space.k = k;
    BigInt factorial_n = 1;
    for (int i = 2; i <= n; ++i) factorial_n *= i;
    BigInt denom = 1;
    for (int i = 2; i <= n - r * k; ++i) denom *= i;
    BigInt factorial_k = 1;
    for (int i = 2; i <= k; ++i) factorial_k *= i;
    for (int i = 0; i < r; ++i) denom *= factorial_k;
    space.labeled_size = factorial_n / denom;
    BigInt factorial_r = 1;
    for (int i = 2; i <= r; ++i) factorial_r *= i;
    space.class_size = space.labeled_size / factorial_r;
    return space;
}

double log_labeled_size(int n, int r, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(n - static_cast<double>(r) * k + 1.0) -
           r * std::lgamma(k + 1.0);
}

namespace {

// sqrt(x)(x/e)^x <= x! in log form; exact 0 at x = 0.
double stirling_log_factorial_lower(int x) {
    if (x == 0) return 0.0;
    return 0.5 * std::log(static_cast<double>(x)) + x * (std::log(static_cast<double>(x)) - 1.0);
}

// x! <= e sqrt(x)(x/e)^x in log form; exact 0 at x = 0 (0! = 1).
double stirling_log_factorial_upper(int x) {
    if (x == 0) return 0.0;
    return 1.0 + 0.5 * std::log(static_cast<double>(x)) +
           x * (std::log(static_cast<double>(x)) - 1.0);
}

}  // namespace

StirlingReport stirling_report(int n, int r, int k) {
    const HypothesisSpace space = space_size(n, r, k);
    const int isolated = n - r * k;
    StirlingReport report;
    report.exact_log = log_big(space.labeled_size);
    report.concrete_lower = stirling_log_factorial_lower(n) -
                            stirling_log_factorial_upper(isolated) -
                            r * stirling_log_factorial_upper(k);
    const double isolated_term =
        isolated == 0 ? 0.0
                      : isolated * std::log(static_cast<double>(n) / isolated);
    report.asymptotic_form =
        isolated_term + static_cast<double>(r) * k * std::log(static_cast<double>(n) / k);
    return report;
}

}  // namespace shsbm
