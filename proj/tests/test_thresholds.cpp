#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "shsbm/errors.hpp"
#include "shsbm/model.hpp"
#include "shsbm/stats.hpp"
#include "shsbm/thresholds.hpp"

using namespace shsbm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool throws_code(const std::string& code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& error) {
        return error.code() == code;
    }
    return false;
}

}  // namespace

TEST_CASE("symmetric bernoulli divergence") {
    CHECK(bernoulli_d(0.6, 0.4) == doctest::Approx(0.162186043243266).epsilon(1e-12));
    CHECK(bernoulli_d(0.55, 0.45) == doctest::Approx(0.0401341390924303).epsilon(1e-12));
    CHECK(bernoulli_d(0.8, 0.3) == doctest::Approx(1.11679611075355).epsilon(1e-12));
    CHECK(bernoulli_d(0.5, 0.5) == 0.0);

    SUBCASE("symmetric in its arguments and under complementation") {
        for (double p : {0.1, 0.35, 0.6, 0.9}) {
            for (double q : {0.05, 0.4, 0.75}) {
                CHECK(bernoulli_d(p, q) == doctest::Approx(bernoulli_d(q, p)).epsilon(1e-13));
                CHECK(bernoulli_d(p, q) ==
                      doctest::Approx(bernoulli_d(1.0 - p, 1.0 - q)).epsilon(1e-13));
                if (p != q) CHECK(bernoulli_d(p, q) > 0.0);
            }
        }
    }
    SUBCASE("boundary behaviour") {
        CHECK(bernoulli_d(1.0, 0.0) == kInf);
        CHECK(bernoulli_d(1.0, 0.3) == kInf);
        CHECK(bernoulli_d(0.0, 0.3) == kInf);
        CHECK(bernoulli_d(0.7, 0.7) == 0.0);
    }
}

TEST_CASE("mutual information upper bound") {
    // For (4,1,2,2): C(k,m) = 1, 1 - C(2,0)/C(4,2) = 5/6.
    const ModelConfig config{4, 1, 2, 2, 0.8, 0.3};
    CHECK(mi_upper_bound(config) ==
          doctest::Approx(5.0 / 6.0 * bernoulli_d(0.8, 0.3)).epsilon(1e-12));
    CHECK(mi_upper_bound(ModelConfig{3, 1, 2, 2, 0.8, 0.3}) ==
          doctest::Approx(0.74453074050236493698).epsilon(1e-12));

    SUBCASE("grows with the gap and never goes negative") {
        double previous = 0.0;
        for (double p : {0.55, 0.65, 0.75, 0.85, 0.95}) {
            const double value = mi_upper_bound(ModelConfig{8, 2, 3, 2, p, 0.5});
            CHECK(value >= previous);
            previous = value;
        }
    }
    SUBCASE("distribution overload accepts only Bernoulli weights") {
        const ModelConfig c = config;
        CHECK(mi_upper_bound(c, WeightDistribution::bernoulli(c.p),
                             WeightDistribution::bernoulli(c.q)) ==
              doctest::Approx(mi_upper_bound(c)));
        CHECK(throws_code("unsupported_divergence", [&] {
            mi_upper_bound(c, WeightDistribution::beta_mean(c.p, 2.0),
                           WeightDistribution::bernoulli(c.q));
        }));
    }
}

TEST_CASE("fano floor") {
    CHECK(fano_floor_value(0.0, std::log(6.0)) ==
          doctest::Approx(0.613147192765458).epsilon(1e-12));
    CHECK(fano_floor_value(100.0, std::log(6.0)) == 0.0);  // clamped at zero
    CHECK(throws_code("undefined_floor", [] { fano_floor_value(0.5, 0.0); }));
    CHECK(throws_code("undefined_floor", [] { fano_floor_value(0.5, -1.0); }));
    // |Y| = 1: the config-level floor is undefined by contract.
    CHECK(throws_code("undefined_floor", [] {
        fano_floor(ModelConfig{2, 1, 2, 2, 0.8, 0.3});
    }));
    CHECK(fano_floor(ModelConfig{6, 1, 3, 2, 0.52, 0.48}) ==
          doctest::Approx(0.763491755692602).epsilon(1e-12));

    SUBCASE("floor only drops as the divergence grows") {
        double previous = 1.0;
        for (double p : {0.51, 0.6, 0.7, 0.8, 0.9}) {
            const double floor = fano_floor(ModelConfig{8, 1, 3, 2, p, 0.5});
            CHECK(floor <= previous + 1e-15);
            previous = floor;
        }
    }
}

TEST_CASE("classification statistics and decision order") {
    const ThresholdParams params;  // c0 = 0.5, C_upper = 1, min_mode

    SUBCASE("deterministic weights are never declared impossible") {
        const ThresholdReport report = classify(ModelConfig{12, 2, 4, 3, 1.0, 0.0}, params);
        CHECK(report.signal_ratio_min == kInf);
        // (p-q)^2 <= (p v q)(1 - (p ^ q)) always, with equality exactly here.
        CHECK(report.signal_ratio_max == 1.0);
        CHECK(report.d_pq == kInf);
        CHECK(report.classification != Classification::impossible_minimax);
    }
    SUBCASE("dense enough signal is declared recoverable") {
        // upper RHS = 6 ln(8) / C(6,3) ~ 0.62 < ratio_max ~ 0.79.
        const ThresholdReport report = classify(ModelConfig{8, 1, 6, 3, 0.9, 0.1}, params);
        CHECK(report.signal_ratio_max == doctest::Approx(0.64 / 0.81).epsilon(1e-12));
        CHECK(report.upper_rhs == doctest::Approx(6.0 * std::log(8.0) / 20.0).epsilon(1e-12));
        CHECK(report.classification == Classification::possible_mle);
    }
    SUBCASE("vanishing separation is declared impossible") {
        // ratio_min = 0.01 / (0.45 * 0.45) ~ 0.049 <= lower RHS ln(2).
        const ThresholdReport report = classify(ModelConfig{4, 1, 2, 2, 0.55, 0.45}, params);
        CHECK(report.signal_ratio_min == doctest::Approx(0.0493827160493827).epsilon(1e-12));
        CHECK(report.lower_rhs == doctest::Approx(0.5 * 2.0 * std::log(2.0)).epsilon(1e-12));
        CHECK(report.classification == Classification::impossible_minimax);
    }
    SUBCASE("max statistic never exceeds min statistic") {
        for (double p : {0.2, 0.5, 0.8}) {
            for (double q : {0.1, 0.4, 0.9}) {
                if (p == q) continue;
                const ThresholdReport report =
                    classify(ModelConfig{10, 2, 4, 2, p, q}, params);
                CHECK(report.signal_ratio_max <= report.signal_ratio_min);
            }
        }
    }
    SUBCASE("sigma mode requires sigmas") {
        ThresholdParams sigma_params;
        sigma_params.mode = DenominatorMode::sigma_mode;
        const ModelConfig config{8, 1, 4, 2, 0.8, 0.3};
        CHECK(throws_code("missing_sigma", [&] { classify(config, sigma_params); }));
        const ThresholdReport report =
            classify(config, sigma_params, std::make_pair(0.25, 0.25));
        CHECK(report.signal_ratio_sigma == doctest::Approx(0.25 / 0.25).epsilon(1e-12));
    }
    SUBCASE("zero variance sends the sigma statistic to infinity") {
        ThresholdParams sigma_params;
        sigma_params.mode = DenominatorMode::sigma_mode;
        const ThresholdReport report =
            classify(ModelConfig{8, 1, 4, 2, 0.8, 0.3}, sigma_params,
                     std::make_pair(0.0, 0.0));
        CHECK(report.signal_ratio_sigma == kInf);
        CHECK(report.classification == Classification::possible_mle);
    }
    SUBCASE("singleton hypothesis space reports a zero floor") {
        const ThresholdReport report = classify(ModelConfig{2, 1, 2, 2, 0.9, 0.1}, params);
        CHECK(report.fano_floor == 0.0);
    }
    SUBCASE("parameter validation") {
        ThresholdParams bad;
        bad.c0 = 1.0;
        CHECK(throws_code("invalid_config",
                          [&] { classify(ModelConfig{4, 1, 2, 2, 0.8, 0.3}, bad); }));
        bad.c0 = 0.5;
        bad.C_upper = 0.0;
        CHECK(throws_code("invalid_config",
                          [&] { classify(ModelConfig{4, 1, 2, 2, 0.8, 0.3}, bad); }));
    }
}

TEST_CASE("mode names round trip") {
    for (DenominatorMode mode :
         {DenominatorMode::min_mode, DenominatorMode::max_mode, DenominatorMode::sigma_mode}) {
        CHECK(mode_from_name(mode_name(mode)) == mode);
    }
    CHECK(mode_from_name("min") == DenominatorMode::min_mode);
    CHECK(mode_from_name("max") == DenominatorMode::max_mode);
    CHECK(mode_from_name("sigma") == DenominatorMode::sigma_mode);
    CHECK(throws_code("parse_error", [] { mode_from_name("median"); }));
}

TEST_CASE("preset thresholds substitute the regime's log factor") {
    const ThresholdParams params;

    SUBCASE("densest_sub keeps ln(n/k) below and ln(n) above") {
        const ModelConfig config{16, 1, 4, 2, 0.8, 0.3};
        const ThresholdReport report =
            preset_thresholds(Preset::densest_sub, config, params);
        const double choose = 6.0;  // C(4,2)
        CHECK(report.lower_rhs ==
              doctest::Approx(0.5 * 4.0 * std::log(4.0) / choose).epsilon(1e-12));
        CHECK(report.upper_rhs ==
              doctest::Approx(4.0 * std::log(16.0) / choose).epsilon(1e-12));
        CHECK(report.preset == "densest_sub");
        CHECK(report.bullet_denominator_lower == "p(1-q)");
        CHECK(report.bullet_denominator_upper == "p(1-q)");
    }
    SUBCASE("planted_sbm with one community has a vacuous lower test") {
        const ModelConfig config{4, 1, 4, 2, 0.8, 0.3};
        const ThresholdReport report =
            preset_thresholds(Preset::planted_sbm, config, params);
        CHECK(report.lower_rhs == 0.0);  // ln(r) = 0
        CHECK(report.classification != Classification::impossible_minimax);
        CHECK(report.fano_floor == 0.0);  // single hypothesis
    }
    SUBCASE("planted_sbm requires a fully covered node set") {
        CHECK(throws_code("invalid_config", [&] {
            preset_thresholds(Preset::planted_sbm, ModelConfig{5, 1, 4, 2, 0.8, 0.3}, params);
        }));
    }
    SUBCASE("multipartite needs q > p and n = rk") {
        const ModelConfig config{8, 2, 4, 2, 0.2, 0.9};
        const ThresholdReport report =
            preset_thresholds(Preset::multipartite, config, params);
        const double choose = 6.0;
        CHECK(report.lower_rhs ==
              doctest::Approx(0.5 * 4.0 * std::log(2.0) / choose).epsilon(1e-12));
        CHECK(report.upper_rhs == doctest::Approx(4.0 * std::log(8.0) / choose).epsilon(1e-12));
        CHECK(report.bullet_denominator_upper == "q(1-p)");
        CHECK(throws_code("invalid_config", [&] {
            preset_thresholds(Preset::multipartite, ModelConfig{8, 2, 4, 2, 0.9, 0.2}, params);
        }));
    }
    SUBCASE("preset names round trip") {
        for (Preset preset : {Preset::planted_sbm, Preset::densest_sub, Preset::multipartite}) {
            CHECK(preset_from_name(preset_name(preset)) == preset);
        }
        CHECK(throws_code("parse_error", [] { preset_from_name("csbm"); }));
    }
}

TEST_CASE("wilson interval") {
    const WilsonInterval all = wilson_interval(10, 10);
    CHECK(all.low == doctest::Approx(0.722467200137).epsilon(1e-9));
    CHECK(all.high == 1.0);

    const WilsonInterval none = wilson_interval(0, 10);
    CHECK(none.low == 0.0);
    CHECK(none.high == doctest::Approx(1.0 - 0.722467200137).epsilon(1e-9));

    const WilsonInterval half = wilson_interval(50, 100);
    CHECK(half.low < 0.5);
    CHECK(half.high > 0.5);
    CHECK(half.low == doctest::Approx(1.0 - half.high).epsilon(1e-12));
}

TEST_CASE("regularized incomplete beta") {
    CHECK(reg_inc_beta(2.0, 3.0, 0.4) == doctest::Approx(0.5248).epsilon(1e-12));
    CHECK(reg_inc_beta(13.0, 99988.0, 0.0002) ==
          doctest::Approx(0.961002107011556).epsilon(1e-10));
    CHECK(reg_inc_beta(0.5, 0.5, 0.3) == doctest::Approx(0.369010119565545).epsilon(1e-10));
    CHECK(reg_inc_beta(1.0, 7.0, 0.05) == doctest::Approx(0.30166270390625).epsilon(1e-12));
    CHECK(reg_inc_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(reg_inc_beta(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("clopper-pearson upper confidence limit") {
    CHECK(clopper_pearson_upper(0, 100000, 0.99) ==
          doctest::Approx(4.60506414965e-05).epsilon(1e-9));
    CHECK(clopper_pearson_upper(12, 100000, 0.99) ==
          doctest::Approx(0.000228196066394).epsilon(1e-9));
    CHECK(clopper_pearson_upper(3, 10000, 0.99) ==
          doctest::Approx(0.00100415796538).epsilon(1e-9));
    CHECK(clopper_pearson_upper(0, 500, 0.99) ==
          doctest::Approx(0.00916805510723).epsilon(1e-9));
    CHECK(clopper_pearson_upper(250, 500, 0.99) ==
          doctest::Approx(0.552844508266).epsilon(1e-9));
    CHECK(clopper_pearson_upper(10, 10, 0.99) == 1.0);
}
