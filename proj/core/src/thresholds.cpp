#include "shsbm/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shsbm/combinatorics.hpp"
#include "shsbm/errors.hpp"

namespace shsbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_positive_ratio(double delta_sq, double denominator) {
    if (denominator <= 0.0) return kInf;
    return delta_sq / denominator;
}

}  // namespace

std::string mode_name(DenominatorMode mode) {
    switch (mode) {
        case DenominatorMode::min_mode: return "min_mode";
        case DenominatorMode::max_mode: return "max_mode";
        case DenominatorMode::sigma_mode: return "sigma_mode";
    }
    fail("internal_error", "unknown mode");
}

DenominatorMode mode_from_name(const std::string& name) {
    if (name == "min_mode" || name == "min") return DenominatorMode::min_mode;
    if (name == "max_mode" || name == "max") return DenominatorMode::max_mode;
    if (name == "sigma_mode" || name == "sigma") return DenominatorMode::sigma_mode;
    fail("parse_error", "unknown denominator mode '" + name + "'");
}

void ThresholdParams::validate() const {
    if (!(c0 > 0.0 && c0 < 1.0)) fail("invalid_config", "c0 must lie in (0,1)");
    if (!(C_upper > 0.0)) fail("invalid_config", "C_upper must be positive");
}

std::string classification_name(Classification c) {
    switch (c) {
        case Classification::impossible_minimax: return "impossible_minimax";
        case Classification::possible_mle: return "possible_mle";
        case Classification::indeterminate_gap: return "indeterminate_gap";
    }
    fail("internal_error", "unknown classification");
}

double bernoulli_d(double p, double q) {
    if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0) {
        fail("invalid_argument", "bernoulli_d requires p, q in [0,1]");
    }
    if (p == q) return 0.0;
    const bool p_boundary = p == 0.0 || p == 1.0;
    const bool q_boundary = q == 0.0 || q == 1.0;
    if (p_boundary || q_boundary) return kInf;
    return (p - q) * std::log(p * (1.0 - q) / (q * (1.0 - p)));
}

double mi_upper_bound(const ModelConfig& config) {
    config.validate();
    const double d = bernoulli_d(config.p, config.q);
    const double within = static_cast<double>(config.within_per_community());
    const BigInt numer = binom(config.n - config.m, config.k - config.m);
    const BigInt denom = binom(config.n, config.k);
    const double ratio = numer == 0 ? 0.0
                         : denom < BigInt(1) << 53
                             ? numer.convert_to<double>() / denom.convert_to<double>()
                             : std::exp(log_big(numer) - log_big(denom));
    const double factor = 1.0 - config.r * ratio;
    if (factor < -1e-12 || factor > 1.0 + 1e-12) {
        fail("internal_error", "coverage factor outside [0,1]");
    }
    return config.r * d * within * std::clamp(factor, 0.0, 1.0);
}

double mi_upper_bound(const ModelConfig& config, const WeightDistribution& dist_in,
                      const WeightDistribution& dist_out) {
    if (dist_in.family != Family::bernoulli || dist_out.family != Family::bernoulli) {
        fail("unsupported_divergence", "d(p,q) is implemented for Bernoulli weights only");
    }
    if (dist_in.mean != config.p || dist_out.mean != config.q) {
        fail("config_mismatch", "distribution means must equal p and q");
    }
    return mi_upper_bound(config);
}

double fano_floor_value(double mi_upper, double log_space) {
    if (!(log_space > 0.0)) fail("undefined_floor", "log |Y| must be positive");
    return std::max(0.0, 1.0 - (mi_upper + std::log(2.0)) / log_space);
}

double fano_floor(const ModelConfig& config) {
    config.validate();
    const HypothesisSpace space = space_size(config.n, config.r, config.k);
    if (space.labeled_size == 1) fail("undefined_floor", "hypothesis space has a single element");
    return fano_floor_value(mi_upper_bound(config), log_big(space.labeled_size));
}

ThresholdReport classify(const ModelConfig& config, const ThresholdParams& params,
                         std::optional<std::pair<double, double>> sigmas) {
    config.validate();
    params.validate();

    ThresholdReport report;
    const double p = config.p;
    const double q = config.q;
    const double lo = std::min(p, q);
    const double hi = std::max(p, q);
    const double delta_sq = (p - q) * (p - q);

    report.d_pq = bernoulli_d(p, q);
    report.signal_ratio_min = require_positive_ratio(delta_sq, lo * (1.0 - hi));
    report.signal_ratio_max = require_positive_ratio(delta_sq, hi * (1.0 - lo));
    if (sigmas) {
        const double max_sigma_sq = std::max(sigmas->first, sigmas->second);
        report.signal_ratio_sigma =
            max_sigma_sq == 0.0 ? kInf : delta_sq / max_sigma_sq;
    } else {
        report.signal_ratio_sigma = std::numeric_limits<double>::quiet_NaN();
        if (params.mode == DenominatorMode::sigma_mode) {
            fail("missing_sigma", "sigma_mode requires sigma values");
        }
    }
    report.mi_upper = mi_upper_bound(config);
    // Singleton hypothesis space: every estimator is exact, the floor is 0.
    const HypothesisSpace space = space_size(config.n, config.r, config.k);
    report.fano_floor =
        space.labeled_size == 1 ? 0.0 : fano_floor_value(report.mi_upper,
                                                         log_big(space.labeled_size));

    const double within = static_cast<double>(config.within_per_community());
    report.lower_rhs = (1.0 - params.c0) * config.k *
                       std::log(static_cast<double>(config.n) / config.k) / within;
    report.upper_rhs =
        params.C_upper * config.k * std::log(static_cast<double>(config.n)) / within;

    const double lower_stat = params.mode == DenominatorMode::max_mode
                                  ? report.signal_ratio_max
                                  : report.signal_ratio_min;
    const double upper_stat = params.mode == DenominatorMode::sigma_mode
                                  ? report.signal_ratio_sigma
                                  : report.signal_ratio_max;
    if (lower_stat <= report.lower_rhs) {
        report.classification = Classification::impossible_minimax;
    } else if (upper_stat >= report.upper_rhs) {
        report.classification = Classification::possible_mle;
    } else {
        report.classification = Classification::indeterminate_gap;
    }
    return report;
}

std::string preset_name(Preset preset) {
    switch (preset) {
        case Preset::planted_sbm: return "planted_sbm";
        case Preset::densest_sub: return "densest_sub";
        case Preset::multipartite: return "multipartite";
    }
    fail("internal_error", "unknown preset");
}

Preset preset_from_name(const std::string& name) {
    if (name == "planted_sbm") return Preset::planted_sbm;
    if (name == "densest_sub") return Preset::densest_sub;
    if (name == "multipartite") return Preset::multipartite;
    fail("parse_error", "unknown preset '" + name + "'");
}

ThresholdReport preset_thresholds(Preset preset, const ModelConfig& config,
                                  const ThresholdParams& params,
                                  std::optional<std::pair<double, double>> sigmas) {
    config.validate();
    switch (preset) {
        case Preset::planted_sbm:
            if (config.n != config.r * config.k) {
                fail("invalid_config", "planted_sbm preset requires n = r*k");
            }
            break;
        case Preset::densest_sub:
            if (config.r != 1) fail("invalid_config", "densest_sub preset requires r = 1");
            break;
        case Preset::multipartite:
            if (config.n != config.r * config.k) {
                fail("invalid_config", "multipartite preset requires n = r*k");
            }
            if (!(config.q > config.p)) {
                fail("invalid_config", "multipartite preset requires q > p");
            }
            break;
    }

    ThresholdReport report = classify(config, params, sigmas);
    const double within = static_cast<double>(config.within_per_community());
    double lower_log = 0.0;
    double upper_log = 0.0;
    report.preset = preset_name(preset);
    switch (preset) {
        case Preset::planted_sbm:
            lower_log = std::log(static_cast<double>(config.r));
            upper_log = std::log(static_cast<double>(config.r));
            report.bullet_denominator_lower = "p(1-q)";
            report.bullet_denominator_upper = "p(1-q)";
            break;
        case Preset::densest_sub:
            lower_log = std::log(static_cast<double>(config.n) / config.k);
            upper_log = std::log(static_cast<double>(config.n));
            report.bullet_denominator_lower = "p(1-q)";
            report.bullet_denominator_upper = "p(1-q)";
            break;
        case Preset::multipartite:
            lower_log = std::log(static_cast<double>(config.r));
            upper_log = std::log(static_cast<double>(config.r) * config.k);
            report.bullet_denominator_lower = "p(1-q)";
            report.bullet_denominator_upper = "q(1-p)";
            break;
    }
    report.lower_rhs = (1.0 - params.c0) * config.k * lower_log / within;
    report.upper_rhs = params.C_upper * config.k * upper_log / within;

    const double lower_stat = params.mode == DenominatorMode::max_mode
                                  ? report.signal_ratio_max
                                  : report.signal_ratio_min;
    const double upper_stat = params.mode == DenominatorMode::sigma_mode
                                  ? report.signal_ratio_sigma
                                  : report.signal_ratio_max;
    if (lower_stat <= report.lower_rhs) {
        report.classification = Classification::impossible_minimax;
    } else if (upper_stat >= report.upper_rhs) {
        report.classification = Classification::possible_mle;
    } else {
        report.classification = Classification::indeterminate_gap;
    }
    return report;
}

}  // namespace shsbm
