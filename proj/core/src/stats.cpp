#include "shsbm/stats.hpp"

#include <algorithm>
#include <cmath>

#include "shsbm/errors.hpp"

namespace shsbm {

namespace {

constexpr double kZ95 = 1.959963984540054;

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    fail("internal_error", "incomplete beta continued fraction did not converge");
}

}  // namespace

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) fail("invalid_argument", "wilson_interval requires trials > 0");
    if (successes > trials) fail("invalid_argument", "successes must not exceed trials");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = kZ95 * kZ95;
    // At the extremes the endpoints simplify exactly; the general formula only
    // reproduces them up to round-off (e.g. an upper bound of 1 + 1 ulp).
    if (successes == 0) return {0.0, z2 / (n + z2)};
    if (successes == trials) return {n / (n + z2), 1.0};
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        kZ95 * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    // Round-off can push the endpoints just past [0,1]; the exact interval never leaves it.
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) fail("invalid_argument", "reg_inc_beta requires a, b > 0");
    if (x < 0.0 || x > 1.0) fail("invalid_argument", "reg_inc_beta requires x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(log_front);
    // The continued fraction converges fast for x < (a+1)/(a+b+2).
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double clopper_pearson_upper(std::uint64_t hits, std::uint64_t n, double confidence) {
    if (n == 0) fail("invalid_argument", "clopper_pearson_upper requires n > 0");
    if (hits > n) fail("invalid_argument", "hits must not exceed n");
    if (!(confidence > 0.0 && confidence < 1.0)) {
        fail("invalid_argument", "confidence must lie in (0,1)");
    }
    if (hits == n) return 1.0;
    const double a = static_cast<double>(hits) + 1.0;
    const double b = static_cast<double>(n - hits);
    double lo = 0.0;
    double hi = 1.0;
    // I_x(a, b) is increasing in x; 200 bisections pin x to ~1e-60.
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (reg_inc_beta(a, b, mid) < confidence) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

}  // namespace shsbm
