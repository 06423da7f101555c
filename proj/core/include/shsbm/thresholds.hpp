#pragma once

#include <optional>
#include <string>

#include "shsbm/model.hpp"

namespace shsbm {

// Which signal statistic faces which side of the recovery test.
//   min_mode   (default): impossible-test uses (p-q)^2/((p^q)(1-(p v q))),
//              possible-test uses (p-q)^2/((p v q)(1-(p^q))).
//   max_mode   : impossible-test also uses the (p v q)(1-(p^q)) denominator.
//   sigma_mode : possible-test uses (p-q)^2/max{sigma_p^2, sigma_q^2}.
enum class DenominatorMode { min_mode, max_mode, sigma_mode };

std::string mode_name(DenominatorMode mode);
DenominatorMode mode_from_name(const std::string& name);

struct ThresholdParams {
    double c0 = 0.5;       // lower-bound slack constant, in (0,1)
    double C_upper = 1.0;  // upper-bound constant, > 0
    DenominatorMode mode = DenominatorMode::min_mode;

    void validate() const;
};

enum class Classification { impossible_minimax, possible_mle, indeterminate_gap };

std::string classification_name(Classification c);

struct ThresholdReport {
    double d_pq = 0.0;               // symmetric Bernoulli KL, may be +inf
    double signal_ratio_min = 0.0;   // (p-q)^2 / ((p^q)(1-(p v q)))
    double signal_ratio_max = 0.0;   // (p-q)^2 / ((p v q)(1-(p^q)))
    double signal_ratio_sigma = 0.0;  // (p-q)^2 / max sigma^2; NaN without sigmas
    double mi_upper = 0.0;           // nats
    double fano_floor = 0.0;         // in [0,1]
    double lower_rhs = 0.0;
    double upper_rhs = 0.0;
    Classification classification = Classification::indeterminate_gap;
    // preset_thresholds only:
    std::string preset;
    std::string bullet_denominator_lower;  // denominator form the source bullet states
    std::string bullet_denominator_upper;
};

// Symmetric KL of Bernoulli(p) vs Bernoulli(q) in nats: 0 at p = q, +inf when
// exactly one of a boundary pair touches {0,1}.
double bernoulli_d(double p, double q);

// r * d(p,q) * C(k,m) * (1 - r*C(n-m,k-m)/C(n,k)); Bernoulli weights only.
double mi_upper_bound(const ModelConfig& config);
double mi_upper_bound(const ModelConfig& config, const WeightDistribution& dist_in,
                      const WeightDistribution& dist_out);

// max(0, 1 - (mi_upper + ln 2)/log_space); throws undefined_floor when
// log_space is not positive.
double fano_floor_value(double mi_upper, double log_space);

// fano_floor_value with this config's Lemma-style MI bound and exact ln|Y|;
// throws undefined_floor when |Y| = 1.
double fano_floor(const ModelConfig& config);

ThresholdReport classify(const ModelConfig& config, const ThresholdParams& params,
                         std::optional<std::pair<double, double>> sigmas = std::nullopt);

enum class Preset { planted_sbm, densest_sub, multipartite };

std::string preset_name(Preset preset);
Preset preset_from_name(const std::string& name);

// Same report with the preset's log factor substituted into both RHS values:
//   planted_sbm  (n = rk):        lower k ln(r)/C(k,m),   upper k ln(r)/C(k,m)
//   densest_sub  (r = 1):         lower k ln(n/k)/C(k,m), upper k ln(n)/C(k,m)
//   multipartite (n = rk, q > p): lower k ln(r)/C(k,m),   upper k ln(rk)/C(k,m)
// The bullet_denominator_* fields record which denominator form the source
// bullet itself uses; the classification statistics stay mode-selected.
ThresholdReport preset_thresholds(Preset preset, const ModelConfig& config,
                                  const ThresholdParams& params,
                                  std::optional<std::pair<double, double>> sigmas = std::nullopt);

}  // namespace shsbm
