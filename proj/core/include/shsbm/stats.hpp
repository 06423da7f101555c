#pragma once

#include <cstdint>

namespace shsbm {

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

// 95% Wilson score interval (z = 1.959963984540054).
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

// Regularized incomplete beta I_x(a, b), a,b > 0, x in [0,1].
double reg_inc_beta(double a, double b, double x);

// One-sided Clopper-Pearson upper confidence limit for a binomial proportion:
// the x with I_x(hits+1, n-hits) = confidence; 1 when hits = n.
double clopper_pearson_upper(std::uint64_t hits, std::uint64_t n, double confidence);

}  // namespace shsbm
