#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace shsbm {

using BigInt = boost::multiprecision::cpp_int;

// C(a, b) exactly; 0 when b < 0 or b > a.
BigInt binom(std::int64_t a, std::int64_t b);

// C(a, b) as uint64_t; throws enumeration_guard on overflow.
std::uint64_t binom_u64(std::int64_t a, std::int64_t b);

// ln C(a, b) via lgamma; -inf when C(a, b) = 0.
double log_binom(std::int64_t a, std::int64_t b);

// Natural log of a positive big integer, accurate to double precision.
double log_big(const BigInt& x);

// Lexicographic rank of a sorted m-subset of {0..n-1} in [0, C(n,m)).
std::uint64_t subset_rank(const std::vector<int>& subset, int n, int m);

// Inverse of subset_rank.
std::vector<int> subset_unrank(std::uint64_t rank, int n, int m);

// In-place lexicographic successor of a sorted m-subset of {0..n-1};
// returns false when the input is the last subset.
bool subset_next(std::vector<int>& subset, int n);

struct HypothesisSpace {
    int n = 0;
    int r = 0;
    int k = 0;
    BigInt labeled_size;   // n! / ((n-rk)! (k!)^r)
    BigInt class_size;     // labeled_size / r!
};

HypothesisSpace space_size(int n, int r, int k);

// ln(labeled_size) via lgamma, without forming the big integer.
double log_labeled_size(int n, int r, int k);

// Finite-size Stirling sandwich on ln(labeled_size): a valid lower bound
// (exact at the 0! corner) plus the looser asymptotic shape, both report-only
// companions to the exact value.
struct StirlingReport {
    double exact_log;        // ln |Y| from the exact big integer
    double concrete_lower;   // always <= exact_log
    double asymptotic_form;  // (n-rk)ln(n/(n-rk)) + rk ln(n/k), no slack term
};

StirlingReport stirling_report(int n, int r, int k);

}  // namespace shsbm
